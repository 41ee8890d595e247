import json

import pytest

from expander_forge.pipeline import BuildConfig, ConfigError


def test_defaults_validate():
    cfg = BuildConfig().validate()
    assert cfg.q == 29


@pytest.mark.parametrize("change,invariant", [
    ({"k": 3}, "k"),
    ({"p_list_L": [5]}, "p_list_L"),
    ({"p_list_R": [5, 5]}, "p_list_R"),
    ({"D_L": 30}, "D_L*d_L = D_R*d_R"),
    ({"D_L": 90, "D_R": 90}, "D_L"),
    ({"d_L": 61, "d_R": 61}, "gadget degrees"),
    ({"p_list_L": [5, 17]}, "PrimeParams(p_list_L)"),
    ({"q": 37}, "PrimeParams(p_list_L)"),
    ({"trim_policy": "random"}, "trim_policy"),
    ({"q_policy": "guess"}, "q_policy"),
    ({"verify": {"bogus": 1}}, "verify"),
])
def test_violations_are_named(change, invariant):
    with pytest.raises(ConfigError) as err:
        BuildConfig(**change).validate()
    assert err.value.invariant == invariant


def test_q_search():
    cfg = BuildConfig(q=None).validate()
    assert cfg.q == 29
    cfg = BuildConfig(q=None, q_policy="progression").validate()
    assert cfg.q == 521


def test_json_roundtrip(tmp_path):
    cfg = BuildConfig(gadget_seed=3, verify={"seed": 9})
    path = tmp_path / "c.json"
    cfg.dump(path)
    assert BuildConfig.load(path) == cfg
    data = json.loads(path.read_text())
    data["colour"] = "blue"
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigError):
        BuildConfig.load(path)
