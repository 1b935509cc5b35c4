"""Reading matrices and vectors, writing plot-ready tables.

Input is headerless CSV (one matrix row per line) or JSON of the form
``{"rows": r, "cols": c, "data": [...row-major...]}``. Floats are written
with ``repr``, the shortest string that round-trips, so output bytes are
stable for a given value.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .linalg import as_matrix


class ParseError(ValueError):
    def __init__(self, path, message, row=None, col=None):
        self.row = row
        self.col = col
        where = f" (row {row}, column {col})" if row is not None else ""
        super().__init__(f"{path}: {message}{where}")


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _parse_float(path, text, row, col):
    try:
        val = float(text)
    except ValueError:
        raise ParseError(path, f"cannot parse {text.strip()!r} as a number", row, col) from None
    if not math.isfinite(val):
        raise ParseError(path, f"non-finite value {text.strip()!r}", row, col)
    return val


def read_matrix(path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(path, f"cannot read file: {exc.strerror}") from None
    if path.suffix.lower() == ".json":
        return _read_json_matrix(path, text)
    rows = []
    for i, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not record or all(not c.strip() for c in record):
            continue
        rows.append([_parse_float(path, c, i, j) for j, c in enumerate(record, start=1)])
    if not rows:
        raise ParseError(path, "no data")
    width = len(rows[0])
    for i, r in enumerate(rows, start=1):
        if len(r) != width:
            raise ParseError(path, f"ragged row: expected {width} columns, got {len(r)}", i, len(r))
    return as_matrix(rows)


def _read_json_matrix(path, text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or set(obj) != {"rows", "cols", "data"}:
        raise ParseError(path, 'expected an object with keys "rows", "cols", "data"')
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows >= 1 and cols >= 1):
        raise ParseError(path, "rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(path, f"data must be a list of {rows * cols} numbers")
    vals = []
    for k, v in enumerate(data):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ParseError(path, f"bad entry {v!r}", k // cols + 1, k % cols + 1)
        vals.append(float(v))
    return as_matrix(np.array(vals).reshape(rows, cols))


def read_vector(path) -> np.ndarray:
    m = read_matrix(path)
    if m.shape[1] == 1:
        return m[:, 0].copy()
    if m.shape[0] == 1:
        return m[0].copy()
    raise ParseError(path, f"expected a single row or column, got shape {m.shape}")


def write_table(rows, header, stream, fmt_kind="csv"):
    """Write dict rows either as CSV with ``header`` columns or as a JSON list."""
    if fmt_kind == "json":
        out = [{k: _json_value(r[k]) for k in header} for r in rows]
        stream.write(json.dumps(out, indent=2) + "\n")
        return
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(r[k]) if not isinstance(r[k], str) else r[k] for k in header])


def _json_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    v = float(v)
    # JSON has no infinities; use the same tokens as the CSV output
    return v if math.isfinite(v) else fmt(v)


def read_spectrum_csv(path):
    """Parse a ``sample,index,eigenvalue`` table back into a ``Spectrum``."""
    from .risk import Spectrum

    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        recs = [(int(r["sample"]), int(r["index"]), float(r["eigenvalue"])) for r in reader]
    samples = max(r[0] for r in recs) + 1
    n = max(r[1] for r in recs) + 1
    vals = np.empty((samples, n))
    for s, i, v in recs:
        vals[s, i] = v
    return Spectrum(vals)
