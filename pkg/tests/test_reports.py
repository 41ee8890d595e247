import json

import numpy as np

from expander_forge.verify import REPORT_VERSION, make_report, to_json


def test_report_shape():
    rep = make_report("x", {"a": 1}, {"m": np.float64(1.5), "arr": np.arange(3)}, 2.0, np.bool_(True))
    assert rep["verdict"] == "pass" and rep["version"] == REPORT_VERSION == "report_v1"
    assert make_report("x", {}, {}, None, None)["verdict"] == "info"
    assert make_report("x", {}, {}, None, False)["verdict"] == "fail"


def test_json_is_stable():
    rep = make_report("x", {"b": 1, "a": (1, 2)}, {"inf": float("inf"), "z": np.int32(4)})
    text = to_json(rep)
    assert text == to_json(json.loads(text))
    assert list(json.loads(text)) == sorted(json.loads(text))
    assert json.loads(text)["measured"]["inf"] == "inf"
