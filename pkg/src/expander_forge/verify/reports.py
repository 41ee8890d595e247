"""Uniform JSON reports for every check."""

from __future__ import annotations

import json
import math

import numpy as np

REPORT_VERSION = "report_v1"


def make_report(check: str, parameters: dict, measured: dict, bound=None, verdict=None) -> dict:
    """Assemble a report. ``verdict`` is "pass", "fail" or "info" (no asserted bound)."""
    if isinstance(verdict, (bool, np.bool_)):
        verdict = "pass" if verdict else "fail"
    return {
        "version": REPORT_VERSION,
        "check": check,
        "parameters": parameters,
        "measured": measured,
        "bound": bound,
        "verdict": verdict or "info",
    }


def clean(obj):
    """Recursively convert numpy scalars/arrays and tuples into JSON types."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def to_json(report, indent: int | None = 2) -> str:
    return json.dumps(clean(report), sort_keys=True, indent=indent) + "\n"
