"""Deterministic JSON/CSV emission: floats at 17 significant digits."""

from __future__ import annotations


def _fmt_float(x: float) -> str:
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with every float at 17 significant digits.

    Key order follows dict insertion order, so identical inputs always give
    byte-identical output.
    """
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        items = [f'"{k}": {dumps(v, indent)}' for k, v in obj.items()]
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v, indent) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def round5(x: float) -> str:
    """Human-readable rendering, 5 significant digits."""
    return format(x, ".5g")
