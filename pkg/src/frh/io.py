"""Table writers: CSV with 12 significant digits, JSON with round-trip floats.

A table is a list of flat dicts sharing one key order plus a metadata
record.  CSV output starts with a ``#`` line holding the metadata as
compact JSON, then a header row.  JSON output is ``{"meta": ..., "rows":
...}`` and validates against ``schemas/table.schema.json``.  Non-finite
floats are written as the strings ``inf``, ``-inf`` and ``nan`` in both
formats.
"""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources

import numpy as np

FORMATS = ("csv", "json")


def _plain(v):
    """Convert numpy scalars and arrays to Python values."""
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.generic):
        return v.item()
    return v


def _json_cell(v):
    v = _plain(v)
    if isinstance(v, list):
        return [_json_cell(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


def format_csv_value(v) -> str:
    v = _plain(v)
    if isinstance(v, list):
        return ";".join(format_csv_value(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        if not math.isfinite(v):
            return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
        return f"{v:.12g}"
    return str(v)


def _columns(rows):
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def to_csv(rows, meta) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(_json_cell_tree(meta), sort_keys=True, separators=(",", ":")) + "\n")
    cols = _columns(rows)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([format_csv_value(r.get(c)) for c in cols])
    return buf.getvalue()


def _json_cell_tree(obj):
    if isinstance(obj, dict):
        return {str(k): _json_cell_tree(v) for k, v in obj.items()}
    return _json_cell(obj)


def to_json(rows, meta) -> str:
    doc = {"meta": _json_cell_tree(meta), "rows": [_json_cell_tree(r) for r in rows]}
    return json.dumps(doc, indent=1, sort_keys=False, allow_nan=False) + "\n"


def render(rows, meta, fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(rows, meta)
    if fmt == "json":
        return to_json(rows, meta)
    raise ValueError(f"unknown format {fmt!r}")


def write_table(rows, meta, fmt: str = "csv", out=None) -> str:
    """Render and write to ``out`` (a path, a text stream, or ``None``)."""
    text = render(rows, meta, fmt)
    if out is None:
        return text
    if isinstance(out, (str, bytes)) or hasattr(out, "__fspath__"):
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return text


def table_schema() -> dict:
    return json.loads(resources.files("frh").joinpath("schemas/table.schema.json").read_text())


def read_csv(text: str):
    """Parse CSV output back into ``(meta, header, rows)`` of strings."""
    lines = text.splitlines()
    meta = json.loads(lines[0][2:]) if lines and lines[0].startswith("# ") else {}
    body = lines[1:] if meta else lines
    rd = list(csv.reader(body))
    return meta, rd[0], rd[1:]
