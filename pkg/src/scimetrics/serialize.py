"""Shared number formatting and JSON/CSV emission.

Every CLI command and API endpoint funnels its output through this module so
that the same quantity always serializes to the same bytes: floats are rounded
to 9 significant digits before encoding, mappings keep insertion order, and
non-finite values become JSON null.
"""

from __future__ import annotations

import dataclasses
import datetime
import json
import math
from typing import Any

SIG_DIGITS = 9


def round_sig(x: float) -> float:
    """Round to SIG_DIGITS significant digits (non-finite passes through)."""
    if not math.isfinite(x):
        return x
    return float(format(x, f".{SIG_DIGITS}g"))


def fmt_float(x: float) -> str:
    """Render a float at 9 significant digits, for CSV cells."""
    if x != x:  # NaN: callers normally map missing to "" before this
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{SIG_DIGITS}g")


def jsonable(obj: Any) -> Any:
    """Recursively convert to JSON-encodable primitives.

    Floats are rounded to 9 significant digits; NaN/inf map to None; dates
    become ISO strings; dataclasses become dicts in field order.
    """
    if obj is None or isinstance(obj, (str, int, bool)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return round_sig(obj)
    if isinstance(obj, datetime.date):
        return obj.isoformat()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):  # numpy array or scalar, any shape
        return jsonable(obj.tolist())
    if hasattr(obj, "item"):  # other numpy scalars
        return jsonable(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(obj: Any, indent: int | None = None) -> str:
    """The one JSON formatter. CLI and API must both use it."""
    return json.dumps(jsonable(obj), indent=indent, allow_nan=False)
