"""Canonical JSON: compact separators, floats with at most 6 decimals and no exponent."""

import json
import math


def format_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x}")
    text = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def dumps(obj) -> str:
    if obj is None or isinstance(obj, (bool, int, float)):
        return "null" if obj is None else format_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def recommendations_to_json(recs) -> str:
    """Ranked list as ``[{"item", "score", "rank"}, ...]``."""
    return dumps([{"item": r.item, "score": r.score, "rank": r.rank} for r in recs])
