"""Reading and writing lattice fields and spectra.

Text layout (``MLF1``)::

    MLF1 n u_min h M [spectrum]
    re im          # M**n lines, lexicographic (C) order

Binary layout, all little-endian: 8-byte magic, u64 ``n``, f64 ``u_min``,
f64 ``h``, u64 ``M``, then ``2 M**n`` f64 values interleaved ``re, im``.
Fields use the magic ``MLFBIN01``; spectra use ``MLFBINS1``.
"""
from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from .grid import LogGrid, LogLatticeField, make_log_grid
from .spectral import MellinSpectrum

__all__ = [
    "FieldFileError",
    "write_field",
    "read_field",
    "write_spectrum",
    "read_spectrum",
    "read_any",
    "import_csv",
]

MAGIC_FIELD = b"MLFBIN01"
MAGIC_SPECTRUM = b"MLFBINS1"
_HEADER = struct.Struct("<QddQ")


class FieldFileError(OSError):
    """Malformed or unreadable MLF/CSV file."""


def _grid_or_error(n, u_min, h, M) -> LogGrid:
    try:
        return make_log_grid(int(n), float(u_min), float(h), int(M))
    except (TypeError, ValueError) as exc:
        raise FieldFileError(f"invalid grid in header: {exc}") from None


def _write(path, grid: LogGrid, data: np.ndarray, spectrum: bool, fmt: str):
    data = np.asarray(data, dtype=complex).ravel()
    if fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(MAGIC_SPECTRUM if spectrum else MAGIC_FIELD)
            fh.write(_HEADER.pack(grid.dim, grid.u_min, grid.step, grid.count))
            inter = np.empty(2 * data.size, dtype="<f8")
            inter[0::2], inter[1::2] = data.real, data.imag
            fh.write(inter.tobytes())
    elif fmt == "text":
        with open(path, "w") as fh:
            flag = " spectrum" if spectrum else ""
            fh.write(f"MLF1 {grid.dim} {grid.u_min!r} {grid.step!r} {grid.count}{flag}\n")
            for v in data:
                fh.write(f"{float(v.real)!r} {float(v.imag)!r}\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _read(path) -> tuple[LogGrid, np.ndarray, bool]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise FieldFileError(f"cannot read {path}: {exc.strerror}") from None
    if raw[:8] in (MAGIC_FIELD, MAGIC_SPECTRUM):
        if len(raw) < 8 + _HEADER.size:
            raise FieldFileError(f"{path}: truncated binary header")
        grid = _grid_or_error(*_HEADER.unpack_from(raw, 8))
        body = np.frombuffer(raw, dtype="<f8", offset=8 + _HEADER.size)
        if body.size != 2 * grid.size:
            raise FieldFileError(f"{path}: expected {2 * grid.size} values, found {body.size}")
        return grid, body[0::2] + 1j * body[1::2], raw[:8] == MAGIC_SPECTRUM
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError:
        raise FieldFileError(f"{path}: not an MLF file") from None
    lines = text.splitlines()
    head = lines[0].split() if lines else []
    if len(head) not in (5, 6) or head[0] != "MLF1" or (len(head) == 6 and head[5] != "spectrum"):
        raise FieldFileError(f"{path}: bad MLF1 header {lines[0] if lines else ''!r}")
    grid = _grid_or_error(*head[1:5])
    rows = [ln for ln in lines[1:] if ln.strip()]
    if len(rows) != grid.size:
        raise FieldFileError(f"{path}: expected {grid.size} value lines, found {len(rows)}")
    try:
        vals = np.array([[float(t) for t in ln.split()] for ln in rows])
    except ValueError:
        raise FieldFileError(f"{path}: non-numeric value line") from None
    if vals.ndim != 2 or vals.shape[1] != 2:
        raise FieldFileError(f"{path}: value lines must hold exactly two numbers")
    return grid, vals[:, 0] + 1j * vals[:, 1], len(head) == 6


def write_field(f: LogLatticeField, path, fmt: str = "text") -> None:
    _write(path, f.grid, f.values, False, fmt)


def write_spectrum(spec: MellinSpectrum, path, fmt: str = "text") -> None:
    _write(path, spec.grid, spec.coeffs, True, fmt)


def read_any(path) -> LogLatticeField | MellinSpectrum:
    grid, data, is_spec = _read(path)
    try:
        if is_spec:
            return MellinSpectrum(grid, data)
        return LogLatticeField(grid, data)
    except ValueError as exc:
        raise FieldFileError(f"{path}: {exc}") from None


def read_field(path) -> LogLatticeField:
    obj = read_any(path)
    if not isinstance(obj, LogLatticeField):
        raise FieldFileError(f"{path} holds a spectrum, not a field")
    return obj


def read_spectrum(path) -> MellinSpectrum:
    obj = read_any(path)
    if not isinstance(obj, MellinSpectrum):
        raise FieldFileError(f"{path} holds a field, not a spectrum")
    return obj


def import_csv(path, grid: LogGrid) -> LogLatticeField:
    """Resample 1-D ``x,value`` samples onto ``grid`` by linear interpolation in ``log x``.

    Lattice points outside the sampled range get 0.
    """
    if grid.dim != 1:
        raise ValueError("CSV import is for one-dimensional grids")
    xs, vs = [], []
    try:
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    x, v = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if not xs:
                        continue  # header
                    raise FieldFileError(f"{path}: bad row {row}") from None
                xs.append(x)
                vs.append(v)
    except OSError as exc:
        if isinstance(exc, FieldFileError):
            raise
        raise FieldFileError(f"cannot read {path}: {exc.strerror}") from None
    xs, vs = np.asarray(xs), np.asarray(vs)
    if xs.size < 2 or np.any(xs <= 0):
        raise FieldFileError(f"{path}: need at least two samples with x > 0")
    order = np.argsort(xs)
    u = np.log(xs[order])
    vals = np.interp(grid.u_axis(), u, vs[order], left=0.0, right=0.0)
    return LogLatticeField(grid, vals)
