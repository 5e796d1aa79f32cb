"""JSON and CSV output with locale-independent, round-trippable numbers."""
from __future__ import annotations

import dataclasses
import io
import json
import math
from typing import Any, NamedTuple, Sequence

import numpy as np


class Table(NamedTuple):
    header: Sequence[str]
    rows: Sequence[Sequence[Any]]


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj)
    if isinstance(obj, Table):
        return [dict(zip(obj.header, row)) for row in obj.rows]
    return obj


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """Serialise nested dicts/lists/numbers; floats carry 17 significant digits.

    Infinite floats become the strings ``"inf"``/``"-inf"``; NaN becomes ``null``.
    """
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    return json.dumps(obj)


def parse_json(text: str):
    """Inverse of :func:`to_json` (maps ``"inf"`` strings back to floats)."""
    def fix(v):
        if isinstance(v, dict):
            return {k: fix(x) for k, x in v.items()}
        if isinstance(v, list):
            return [fix(x) for x in v]
        if v == "inf":
            return math.inf
        if v == "-inf":
            return -math.inf
        return v
    return fix(json.loads(text))


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def to_csv(table) -> str:
    """Header row then data rows, ``\\n`` line endings, ``.`` decimal point."""
    if not isinstance(table, Table):
        d = _plain(table)
        table = Table(list(d.keys()), [list(d.values())])
    buf = io.StringIO()
    buf.write(",".join(table.header) + "\n")
    for row in table.rows:
        buf.write(",".join(_csv_cell(v) for v in row) + "\n")
    return buf.getvalue()


def emit_report(result, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (to_json(result) + "\n").encode()
    if fmt == "csv":
        return to_csv(result).encode()
    raise ValueError(f"unknown output format {fmt!r}")
