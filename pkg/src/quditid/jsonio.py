"""Deterministic JSON output with full double precision.

The standard json encoder formats floats with repr(), which is already
round-trip exact, but its output length varies and it cannot be told to
keep a fixed significant-digit form.  Reports here promise 17
significant digits for every numeric value, so this module renders
numbers itself and leaves everything else to the stdlib.
"""

import json
import math

import numpy as np


def format_float(x):
    """17-significant-digit decimal form, always visibly a float."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in JSON output")
    s = format(x, ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _render(obj, indent, level):
    pad = " " * (indent * (level + 1))
    close_pad = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for key, value in obj.items():
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            parts.append(f"{pad}{json.dumps(key)}: {_render(value, indent, level + 1)}")
        return "{\n" + ",\n".join(parts) + "\n" + close_pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        parts = [f"{pad}{_render(item, indent, level + 1)}" for item in items]
        return "[\n" + ",\n".join(parts) + "\n" + close_pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def dumps(obj, indent=2):
    """Serialize to pretty-printed JSON with deterministic numerics."""
    return _render(obj, indent, 0)
