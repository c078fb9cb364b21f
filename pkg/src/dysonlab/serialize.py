"""Deterministic artifact rendering: 17-significant-digit floats, sorted keys."""

from __future__ import annotations

import numpy as np

__all__ = ["format_float", "dump_json", "write_csv"]


def format_float(x) -> str:
    return format(float(x), ".17g")


def _render(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        body = ", ".join(f"{_render(str(k))}: {_render(v)}" for k, v in items)
        return "{" + body + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_render(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dump_json(obj) -> str:
    """JSON with sorted keys and all floats at 17 significant digits."""
    return _render(obj) + "\n"


def write_csv(header, rows, meta: dict | None = None) -> str:
    """CSV text; numeric cells must be pre-formatted strings or ints.

    ``meta`` is embedded as a single leading comment line so artifacts stay
    self-describing without breaking column parsing.
    """
    lines = []
    if meta:
        pairs = " ".join(f"{k}={meta[k]}" for k in sorted(meta))
        lines.append(f"# {pairs}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"
