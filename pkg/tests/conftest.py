import pytest
from hypothesis import HealthCheck, settings

from expander_forge.pipeline import Build, BuildConfig
from expander_forge.psl2 import PSL2Group

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def G29():
    return PSL2Group(29)


@pytest.fixture(scope="session")
def desk(tmp_path_factory):
    """The q = 29, k = 2, D = 60, d = 6 build used throughout."""
    out = tmp_path_factory.mktemp("desk")
    return Build(BuildConfig(out_dir=str(out)))


@pytest.fixture(scope="session")
def Z(desk):
    return desk.product


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    n, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    if rep.when == "call" or rep.failed:
        _CRITERIA[n] = (title, "PASS" if rep.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, verdict, detail = _CRITERIA[n]
        line = f"criterion {n:2d} {verdict}: {title}"
        terminalreporter.write_line(line + (f" [{detail}]" if detail else ""))
