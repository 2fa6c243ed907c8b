"""Deterministic report serialization.

JSON is written by a small local encoder so the byte stream is fully
determined by the payload: keys sorted, LF newlines, floats rendered with 17
significant digits (round-trip exact for doubles), no locale influence.
Complex numbers appear as [re, im] pairs; numpy scalars and arrays are
converted before encoding.
"""

from __future__ import annotations

import json

import numpy as np

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "to_jsonable", "dumps", "write_report", "write_csv"]


def to_jsonable(obj):
    """Convert nested payloads (numpy, complex, dataclass-likes) to plain data."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {k: to_jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _encode(obj, out):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if obj != obj:
            out.append('"nan"')
        elif obj == float("inf"):
            out.append('"inf"')
        elif obj == float("-inf"):
            out.append('"-inf"')
        else:
            out.append(format(obj, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for k in sorted(obj):
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(str(k), ensure_ascii=True))
            out.append(":")
            _encode(obj[k], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, x in enumerate(obj):
            if i:
                out.append(",")
            _encode(x, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(obj)!r}; run to_jsonable first")


def dumps(payload) -> str:
    out = []
    _encode(to_jsonable(payload), out)
    return "".join(out) + "\n"


def write_report(path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(payload))


def write_csv(path, header, rows) -> None:
    """Two-plus column numeric CSV, gnuplot-friendly: decimal points, LF."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format(float(x), ".17g") for x in row) + "\n")
