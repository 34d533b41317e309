"""Columnar text output shared by the CLI and the sampled-function interchange.

Layout: ``#``-prefixed metadata lines, one comma-separated header row, then
data rows.  Floats use 17 significant digits and lines end with LF, so equal
inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .entangle import MatrixFn
from .errors import ImpurityThermoError

__all__ = [
    "NonFiniteOutput",
    "format_float",
    "render_table",
    "write_table",
    "matrix_fn_columns",
    "write_matrix_fn",
    "read_matrix_fn",
]


class NonFiniteOutput(ImpurityThermoError, ValueError):
    """A value headed for a CSV file is NaN or infinite."""


def format_float(x: float) -> str:
    """17 significant digits; negative zero is written as ``0``."""
    return format(float(x) + 0.0, ".17g")


def render_table(header: Sequence[str], rows: Iterable[Sequence[float]],
                 meta: Sequence[str] = (), footer: Sequence[str] = (),
                 operation: str = "output") -> str:
    """Render a table to text, refusing non-finite numbers."""
    buf = io.StringIO()
    for line in meta:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for i, row in enumerate(rows):
        for name, value in zip(header, row):
            if not math.isfinite(value):
                raise NonFiniteOutput(
                    f"{operation}: non-finite value {value!r} in column {name!r}, data row {i + 1}")
        writer.writerow([format_float(v) for v in row])
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def write_table(path, header, rows, meta=(), footer=(), operation="output") -> Path:
    text = render_table(header, list(rows), meta, footer, operation)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def matrix_fn_columns(dim: int) -> list[str]:
    cols = ["omega"]
    for i in range(dim):
        for j in range(dim):
            cols += [f"re_{i}{j}" if dim <= 10 else f"re_{i}_{j}",
                     f"im_{i}{j}" if dim <= 10 else f"im_{i}_{j}"]
    return cols


def write_matrix_fn(path, fn: MatrixFn, meta: Sequence[str] = ()) -> Path:
    """Write ``fn`` as ``omega, re_00, im_00, re_01, im_01, ...`` (row-major)."""
    flat = fn.values.reshape(len(fn), -1)
    rows = []
    for w, vals in zip(fn.grid, flat):
        row = [float(w)]
        for v in vals:
            row += [float(v.real), float(v.imag)]
        rows.append(row)
    return write_table(path, matrix_fn_columns(fn.dim), rows, meta, operation="write_matrix_fn")


def read_matrix_fn(path) -> MatrixFn:
    """Inverse of :func:`write_matrix_fn`; ``#`` lines are skipped."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#") and ln.strip()]
    reader = csv.reader(lines)
    header = next(reader)
    ncols = len(header) - 1
    dim = math.isqrt(ncols // 2)
    if header[0] != "omega" or ncols != 2 * dim * dim or header != matrix_fn_columns(dim):
        raise ValueError(f"{path}: header is not a square-matrix interchange header")
    data = np.array([[float(x) for x in row] for row in reader], dtype=float)
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValueError(f"{path}: ragged or empty data")
    values = (data[:, 1::2] + 1j * data[:, 2::2]).reshape(-1, dim, dim)
    return MatrixFn(data[:, 0], values)
