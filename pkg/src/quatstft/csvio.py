"""CSV readers and writers for signals, time-frequency grids, coefficients and Hermite samples.

Floats are written with ``repr`` (shortest round-trip form), so identical
inputs give byte-identical files.  All writes go to a temporary file in the
target directory and are moved into place with ``os.replace``.
"""
from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from typing import Iterable, List, Sequence

import numpy as np

from .bargmann import CoefficientSequence
from .quadrature import BadGridSpec, LineGrid, SampledSignal
from .quaternion import ImaginaryUnit, qabs
from .qstft import TimeFreqGrid

SIGNAL_HEADER = ("t", "w", "x", "y", "z")
REAL_SIGNAL_HEADER = ("t", "w")
GRID_HEADER = ("x", "w", "vw", "vx", "vy", "vz", "mag")
COEFF_HEADER = ("k", "cw", "cx", "cy", "cz")
HERMITE_HEADER = ("t", "value")


class ParseError(ValueError):
    """Malformed CSV content; ``line`` is 1-based (the header is line 1)."""

    def __init__(self, message: str, line: int = 0, path: str = ""):
        self.line = line
        self.path = path
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")


class IoError(OSError):
    pass


def _fmt(v) -> str:
    return repr(float(v))


def _read_rows(path: str):
    try:
        with open(path, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        rows.append((lineno, [c.strip() for c in row]))
    if not rows:
        raise ParseError("empty file", 1, path)
    return rows


def _floats(lineno: int, cells: Sequence[str], width: int, path: str) -> List[float]:
    if len(cells) != width:
        raise ParseError(f"expected {width} fields, found {len(cells)}", lineno, path)
    out = []
    for c in cells:
        try:
            v = float(c)
        except ValueError:
            raise ParseError(f"not a number: {c!r}", lineno, path) from None
        if not math.isfinite(v):
            raise ParseError(f"non-finite value {c!r}", lineno, path)
        out.append(v)
    return out


def _axis(nodes, lineno: int, path: str, name: str) -> LineGrid:
    try:
        return LineGrid.from_nodes(nodes)
    except BadGridSpec as exc:
        raise ParseError(f"bad {name} axis: {exc}", lineno, path) from None


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _table(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# signals


def format_signal(f: SampledSignal) -> str:
    data = np.column_stack([f.grid.nodes, f.values])
    return _table(SIGNAL_HEADER, data)


def write_signal(path: str, f: SampledSignal) -> None:
    write_atomic(path, format_signal(f))


def read_signal(path: str) -> SampledSignal:
    """Read ``t,w,x,y,z`` or ``t,w``; nodes must be strictly increasing."""
    rows = _read_rows(path)
    lineno, header = rows[0]
    header = tuple(h.lower() for h in header)
    if header not in (SIGNAL_HEADER, REAL_SIGNAL_HEADER):
        raise ParseError(f"header must be {','.join(SIGNAL_HEADER)} or t,w; got {','.join(header)}", lineno, path)
    width = len(header)
    data = [_floats(ln, cells, width, path) for ln, cells in rows[1:]]
    if len(data) < 2:
        raise ParseError("a signal needs at least two rows", rows[-1][0], path)
    arr = np.array(data)
    t = arr[:, 0]
    bad = np.nonzero(np.diff(t) <= 0)[0]
    if bad.size:
        raise ParseError("time nodes must be strictly increasing", rows[1 + bad[0] + 1][0], path)
    vals = np.zeros((len(t), 4))
    vals[:, : width - 1] = arr[:, 1:]
    return SampledSignal(_axis(t, rows[1][0], path, "time"), vals)


# ---------------------------------------------------------------------------
# time-frequency grids


def format_grid(V: TimeFreqGrid) -> str:
    X, W = np.meshgrid(V.xgrid.nodes, V.wgrid.nodes, indexing="ij")
    vals = V.values.reshape(-1, 4)
    data = np.column_stack([X.ravel(), W.ravel(), vals, qabs(vals)])
    return _table(GRID_HEADER, data)


def write_grid(path: str, V: TimeFreqGrid) -> None:
    write_atomic(path, format_grid(V))


def read_grid(path: str, unit: ImaginaryUnit) -> TimeFreqGrid:
    """Read an ``x,w,vw,vx,vy,vz,mag`` table in x-major order.

    The slice unit is not stored in the file and must be supplied.  The
    ``mag`` column is ignored on input.
    """
    rows = _read_rows(path)
    lineno, header = rows[0]
    if tuple(h.lower() for h in header) != GRID_HEADER:
        raise ParseError(f"header must be {','.join(GRID_HEADER)}", lineno, path)
    data = [_floats(ln, cells, len(GRID_HEADER), path) for ln, cells in rows[1:]]
    if not data:
        raise ParseError("no data rows", lineno, path)
    arr = np.array(data)
    xs = np.unique(arr[:, 0])
    ws = np.unique(arr[:, 1])
    nx, nw = len(xs), len(ws)
    if nx * nw != len(arr):
        raise ParseError(f"{len(arr)} rows do not form a full {nx} x {nw} lattice", rows[-1][0], path)
    X = arr[:, 0].reshape(nx, nw)
    W = arr[:, 1].reshape(nx, nw)
    ok_x = np.all(X == xs[:, None], axis=1)
    ok_w = np.all(W == ws[None, :], axis=1)
    bad = np.nonzero(~(ok_x & ok_w))[0]
    if bad.size:
        raise ParseError("rows must be ordered by x, then w", rows[1 + bad[0] * nw][0], path)
    xgrid = _axis(xs, rows[1][0], path, "x")
    wgrid = _axis(ws, rows[1][0], path, "w")
    return TimeFreqGrid(xgrid, wgrid, unit, arr[:, 2:6].reshape(nx, nw, 4))


# ---------------------------------------------------------------------------
# coefficients and Hermite samples


def format_coefficients(c: CoefficientSequence) -> str:
    data = np.column_stack([np.arange(len(c)), c.coeffs])
    lines = [",".join(COEFF_HEADER)]
    for row in data:
        lines.append(",".join([str(int(row[0]))] + [_fmt(v) for v in row[1:]]))
    return "\n".join(lines) + "\n"


def write_coefficients(path: str, c: CoefficientSequence) -> None:
    write_atomic(path, format_coefficients(c))


def read_coefficients(path: str, nu: float) -> CoefficientSequence:
    rows = _read_rows(path)
    lineno, header = rows[0]
    if tuple(h.lower() for h in header) != COEFF_HEADER:
        raise ParseError(f"header must be {','.join(COEFF_HEADER)}", lineno, path)
    coeffs = []
    for expect, (ln, cells) in enumerate(rows[1:]):
        vals = _floats(ln, cells, len(COEFF_HEADER), path)
        if vals[0] != expect:
            raise ParseError(f"expected k = {expect}", ln, path)
        coeffs.append(vals[1:])
    return CoefficientSequence(nu, np.array(coeffs).reshape(-1, 4))


def format_hermite(t, values) -> str:
    return _table(HERMITE_HEADER, np.column_stack([t, values]))


def write_hermite(path: str, t, values) -> None:
    write_atomic(path, format_hermite(t, values))
