"""Deterministic JSON and plain-text rendering of reports."""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np


def jsonable(x):
    """Convert library values to plain JSON values; rationals become {"num", "den"}."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, float):
        raise TypeError("floating point values are not allowed in reports")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return jsonable(Fraction(int(x.numerator), int(x.denominator)))
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _lines(prefix: str, value, out: list) -> None:
    if isinstance(value, dict) and set(value) == {"num", "den"}:
        out.append(f"{prefix}: {value['num']}/{value['den']}" if value["den"] != 1 else f"{prefix}: {value['num']}")
    elif isinstance(value, dict):
        for k in sorted(value):
            _lines(f"{prefix}.{k}" if prefix else k, value[k], out)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, v in enumerate(value):
            _lines(f"{prefix}[{i}]", v, out)
    else:
        out.append(f"{prefix}: {json.dumps(value, sort_keys=True)}")


def to_text(report: dict) -> str:
    data = jsonable(report)
    out = [f"task: {data.get('task')}", f"status: {data.get('status')}"]
    for key in sorted(data):
        if key in ("task", "status"):
            continue
        _lines(key, data[key], out)
    return "\n".join(out) + "\n"
