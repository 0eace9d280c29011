"""Mellin-frequency calculus on a log lattice.

In log coordinates the Mellin translation ``U_j(t)`` is an ordinary shift,
so the unitary discrete Fourier transform diagonalizes all of them at once.
Everything here is a spectral multiplier:

==========================  ==========================
operator                    symbol
==========================  ==========================
``U_j(t)``                  ``exp(i xi_j t)``
``Theta_j^k``               ``(i xi_j)^k``
``L^beta``                  ``|xi|^(2 beta)``
``exp(i t L)``              ``exp(i t |xi|^2)``
``F(L)``                    ``F(|xi|^2)``
==========================  ==========================

Spectrum coefficients are normalized like the continuous transform
``(2 pi)^(-n/2) int f(u) exp(-i xi.u) du``, so the Parseval weight is
``freq_step**n`` and the values do not depend on where the window starts.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import LogGrid, LogLatticeField

__all__ = [
    "MellinSpectrum",
    "Multiplier",
    "mellin_transform",
    "inverse_mellin",
    "translate",
    "theta_apply",
    "laplace_mellin_apply",
    "apply_multiplier",
    "apply_symbol",
    "evolve",
    "energy_density",
]


@dataclass(frozen=True, eq=False)
class MellinSpectrum:
    """Mellin-frequency coefficients of a lattice field.

    ``coeffs[m]`` approximates ``(2 pi)^(-n/2) * M f(-i xi_m)``, i.e. the
    Mellin transform on the line ``Re s = 0`` with the sign convention of
    the Fourier transform in ``u = log x``.
    """

    grid: LogGrid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(self.grid.shape)
        if not np.all(np.isfinite(c)):
            raise ValueError("spectrum coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def weight(self) -> float:
        """Parseval weight ``(2 pi / (M h))**n``."""
        return self.grid.freq_step**self.grid.dim

    def norm(self) -> float:
        return math.sqrt(self.weight * float(np.sum(np.abs(self.coeffs) ** 2)))

    def mellin_values(self) -> np.ndarray:
        """Samples of the Mellin transform ``int f(x) x^(s-1) dx`` at ``s = -i xi``."""
        return (2 * math.pi) ** (self.grid.dim / 2) * self.coeffs


def _origin_phase(grid: LogGrid) -> np.ndarray:
    phase = np.zeros(grid.shape)
    for xi in grid.frequencies():
        phase = phase + xi * grid.u_min
    return np.exp(-1j * phase)


def _scale(grid: LogGrid) -> float:
    return grid.cell_volume / (2 * math.pi) ** (grid.dim / 2)


def mellin_transform(f: LogLatticeField) -> MellinSpectrum:
    """Unitary discrete Mellin transform of a lattice field."""
    grid = f.grid
    coeffs = np.fft.fftn(f.values) * _scale(grid) * _origin_phase(grid)
    return MellinSpectrum(grid, coeffs)


def inverse_mellin(spec: MellinSpectrum) -> LogLatticeField:
    grid = spec.grid
    values = np.fft.ifftn(spec.coeffs / (_scale(grid) * _origin_phase(grid)))
    return LogLatticeField(grid, values)


def apply_symbol(f: LogLatticeField, symbol) -> LogLatticeField:
    """Apply the Fourier multiplier ``symbol`` (array broadcastable to the grid)."""
    symbol = np.asarray(symbol)
    if not np.all(np.isfinite(symbol)):
        raise ValueError("multiplier is not finite on the frequency lattice")
    return f.with_values(np.fft.ifftn(np.fft.fftn(f.values) * symbol))


def energy_density(f: LogLatticeField) -> np.ndarray:
    """``|f_hat(xi)|^2 * freq_step**n``; sums to ``||f||_2^2``."""
    F = np.fft.fftn(f.values)
    return np.abs(F) ** 2 * (f.grid.cell_volume / f.grid.size)


def translate(f: LogLatticeField, j: int, t: float) -> LogLatticeField:
    """Mellin translation ``f(x_1, ..., e^t x_j, ..., x_n)`` along axis ``j`` (1-based).

    Defined spectrally, so it is an exact isometric group for every real
    ``t``; when ``t`` is a multiple of the step it is a cyclic index shift.
    """
    ax = f.grid.check_axis(j)
    shift = t / f.grid.step
    k = round(shift)
    # snap only round-off: a skipped phase costs up to pi |shift - k| in norm
    if abs(shift - k) <= 8 * np.finfo(float).eps * max(1.0, abs(shift)):
        return f.with_values(np.roll(f.values, -k, axis=ax))
    xi = f.grid.frequencies()[ax]
    return apply_symbol(f, np.exp(1j * xi * t))


def theta_apply(f: LogLatticeField, j: int, k: int = 1) -> LogLatticeField:
    """``Theta_j^k f`` with ``Theta_j = x_j d/dx_j`` (symbol ``(i xi_j)^k``)."""
    ax = f.grid.check_axis(j)
    if int(k) != k or k < 0:
        raise ValueError(f"power must be a nonnegative integer, got {k}")
    if k == 0:
        return f
    xi = f.grid.frequencies()[ax]
    return apply_symbol(f, (1j * xi) ** int(k))


def _radial_power(grid: LogGrid, power: float) -> np.ndarray:
    rad = grid.radial_frequency()
    if power == 0:
        return np.ones(grid.shape)
    out = np.zeros(grid.shape)
    nz = rad > 0
    out[nz] = rad[nz] ** power
    return out


def laplace_mellin_apply(f: LogLatticeField, beta: float = 1.0) -> LogLatticeField:
    """Fractional power ``L^beta`` of ``L = -sum_j Theta_j^2`` (symbol ``|xi|^(2 beta)``)."""
    if not beta >= 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    if beta == 0:
        return f
    return apply_symbol(f, _radial_power(f.grid, 2 * beta))


def evolve(f: LogLatticeField, t: float) -> LogLatticeField:
    """Unitary group ``exp(i t L) f``."""
    rad2 = f.grid.radial_frequency() ** 2
    return apply_symbol(f, np.exp(1j * t * rad2))


@dataclass(frozen=True)
class Multiplier:
    """Scalar profile ``lambda -> F(lambda)`` on ``[0, inf)``."""

    profile: Callable[[np.ndarray], np.ndarray]

    def __call__(self, lam) -> np.ndarray:
        return np.asarray(self.profile(np.asarray(lam, dtype=float)))

    @classmethod
    def from_table(cls, lam, values) -> "Multiplier":
        """Piecewise-linear profile through ``(lam, values)``, constant beyond the ends."""
        lam = np.asarray(lam, dtype=float)
        values = np.asarray(values)
        if lam.ndim != 1 or lam.shape != values.shape or lam.size < 1:
            raise ValueError("multiplier table needs matching 1-D columns")
        order = np.argsort(lam)
        lam, values = lam[order], values[order]
        if np.iscomplexobj(values):
            return cls(lambda x: np.interp(x, lam, values.real)
                       + 1j * np.interp(x, lam, values.imag))
        return cls(lambda x: np.interp(x, lam, values))

    @classmethod
    def load(cls, path) -> "Multiplier":
        """Read a two-column ``lambda,value`` CSV (header optional)."""
        lam, vals = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    a, b = float(row[0]), float(row[1])
                except ValueError:
                    if not lam:
                        continue  # header line
                    raise
                lam.append(a)
                vals.append(b)
        return cls.from_table(lam, vals)


def apply_multiplier(f: LogLatticeField, F: Multiplier | Callable, mode: str = "radial",
                     j: int | None = None) -> LogLatticeField:
    """``F(L) f``.

    ``mode="radial"`` evaluates the profile at ``lambda = |xi|^2`` (a function
    of the Laplace-Mellin operator); ``mode="axis"`` evaluates it at
    ``lambda = |xi_j|`` for a function of the single generator on axis ``j``.
    """
    if not isinstance(F, Multiplier):
        F = Multiplier(F)
    if mode == "radial":
        lam = f.grid.radial_frequency() ** 2
    elif mode == "axis":
        if j is None:
            raise ValueError("axis mode needs an axis index j")
        ax = f.grid.check_axis(j)
        lam = np.abs(f.grid.frequencies()[ax])
    else:
        raise ValueError(f"unknown multiplier mode {mode!r}")
    return apply_symbol(f, F(lam))
