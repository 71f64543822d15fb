"""CSV/JSON serialization. Floats are written with 17 significant digits."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable

import numpy as np

from .field import SolutionField

__all__ = [
    "atomic_write_text",
    "write_json",
    "field_to_csv",
    "field_from_csv",
    "write_field_csv",
    "read_field_csv",
    "traces_to_csv",
    "residuals_to_csv",
    "rows_to_csv",
]


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return "%.17g" % float(v)


def atomic_write_text(path, text: str) -> Path:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if np.isfinite(v):
            return v
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, payload) -> Path:
    return atomic_write_text(path, json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def rows_to_csv(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def field_to_csv(field: SolutionField) -> str:
    """``x,t,h,u`` rows, x-major (all times of the first x node come first)."""
    X, T = np.meshgrid(field.x_grid, field.t_grid, indexing="ij")
    cols = (X.ravel(), T.ravel(), field.h_values.ravel(), field.u_values.ravel())
    return rows_to_csv(("x", "t", "h", "u"), zip(*cols))


def field_from_csv(text: str) -> SolutionField:
    data = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    x = np.unique(data[:, 0])
    t = np.unique(data[:, 1])
    if data.shape[0] != x.size * t.size:
        raise ValueError("field CSV is not a complete tensor grid")
    shape = (x.size, t.size)
    if not (np.array_equal(data[:, 0].reshape(shape)[:, 0], x) and np.array_equal(data[:, 1].reshape(shape)[0], t)):
        raise ValueError("field CSV rows are not x-major")
    return SolutionField(x, t, data[:, 2].reshape(shape), data[:, 3].reshape(shape))


def write_field_csv(path, field: SolutionField) -> Path:
    return atomic_write_text(path, field_to_csv(field))


def read_field_csv(path) -> SolutionField:
    return field_from_csv(Path(path).read_text())


def traces_to_csv(curves) -> str:
    """``family,t,x,h,u,J`` rows, one block per curve."""
    rows = []
    for c in curves:
        for t, x, h, u, J in c.samples:
            rows.append((c.family, t, x, h, u, J))
    return rows_to_csv(("family", "t", "x", "h", "u", "J"), rows)


def residuals_to_csv(entries) -> str:
    """``check,x,t,value`` rows from ``(check, x_array, t_array, values)`` tuples."""
    rows = []
    for name, xs, ts, vals in entries:
        for x, t, v in zip(np.ravel(xs), np.ravel(ts), np.ravel(vals)):
            rows.append((name, x, t, v))
    return rows_to_csv(("check", "x", "t", "value"), rows)
