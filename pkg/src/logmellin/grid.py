"""Log-uniform lattices on the positive orthant and fields sampled on them.

A lattice point along one axis is ``x_k = exp(u_min + k*h)`` for
``k = 0..M-1``.  In the log coordinate ``u = log x`` the scale-invariant
measure ``dx_1...dx_n / (x_1...x_n)`` becomes plain Lebesgue measure, so
every ``X^p`` integral is a rectangle-rule sum with cell volume ``h**n``.

Fields are treated as periodic in each log coordinate with period ``M*h``.
Functions that do not decay before the window edge are wrapped around;
:meth:`LogLatticeField.edge_mass` reports how much energy sits near the
boundary so callers can pick a wider window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "LogGrid",
    "LogLatticeField",
    "make_log_grid",
    "xp_norm",
    "inner_product",
    "parse_exponent",
]


@dataclass(frozen=True)
class LogGrid:
    """Isotropic log-uniform periodic lattice over ``R_+^n``.

    Parameters
    ----------
    dim : int
        Number of axes ``n``.
    u_min : float
        Log coordinate of the first lattice point on every axis.
    step : float
        Log spacing ``h``.
    count : int
        Points per axis ``M``.
    """

    dim: int
    u_min: float
    step: float
    count: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim}")
        if not (math.isfinite(self.step) and self.step > 0):
            raise ValueError(f"log step must be positive, got {self.step}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"need at least 2 points per axis, got {self.count}")
        if not math.isfinite(self.u_min):
            raise ValueError("u_min must be finite")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.count,) * self.dim

    @property
    def size(self) -> int:
        return self.count**self.dim

    @property
    def period(self) -> float:
        """Length ``M*h`` of the log window."""
        return self.count * self.step

    @property
    def cell_volume(self) -> float:
        return self.step**self.dim

    @property
    def freq_step(self) -> float:
        """Spacing ``2*pi/(M*h)`` of the Mellin frequency lattice."""
        return 2.0 * math.pi / self.period

    @property
    def nyquist(self) -> float:
        """Largest per-axis frequency ``pi/h`` (the positive Nyquist bin)."""
        return self.freq_step * (self.count // 2)

    @property
    def spectral_radius(self) -> float:
        """Largest Euclidean frequency ``|xi|`` present on the lattice."""
        return self.nyquist * math.sqrt(self.dim)

    def u_axis(self) -> np.ndarray:
        return self.u_min + self.step * np.arange(self.count)

    def x_axis(self) -> np.ndarray:
        return np.exp(self.u_axis())

    def u_coords(self) -> list[np.ndarray]:
        """Dense log coordinates, one array of shape :attr:`shape` per axis."""
        return np.meshgrid(*([self.u_axis()] * self.dim), indexing="ij")

    def x_coords(self) -> list[np.ndarray]:
        return [np.exp(u) for u in self.u_coords()]

    def freq_axis(self) -> np.ndarray:
        """Signed frequencies in FFT order.

        Bin ``m`` maps to ``m_tilde * 2*pi/(M*h)`` with ``m_tilde`` the alias of
        ``m`` in ``(-M/2, M/2]``; for even ``M`` the Nyquist bin is positive.
        """
        m = np.arange(self.count)
        signed = np.where(m > self.count // 2, m - self.count, m)
        return self.freq_step * signed

    def frequencies(self) -> list[np.ndarray]:
        """Per-axis frequency arrays shaped for broadcasting against fields."""
        xi = self.freq_axis()
        out = []
        for j in range(self.dim):
            shape = [1] * self.dim
            shape[j] = self.count
            out.append(xi.reshape(shape))
        return out

    def radial_frequency(self) -> np.ndarray:
        """``|xi|`` on the full frequency lattice (shape :attr:`shape`)."""
        sq = np.zeros(self.shape)
        for xi in self.frequencies():
            sq = sq + xi**2
        return np.sqrt(sq)

    def check_axis(self, j: int) -> int:
        """Validate a 1-based axis index and return the 0-based one."""
        if int(j) != j or not 1 <= j <= self.dim:
            raise ValueError(f"axis must be in 1..{self.dim}, got {j}")
        return int(j) - 1


def make_log_grid(n: int, u_min: float, h: float, M: int) -> LogGrid:
    """Build the lattice ``exp(u_min + k*h)``, ``k < M``, on each of ``n`` axes."""
    return LogGrid(dim=n, u_min=float(u_min), step=float(h), count=M)


@dataclass(frozen=True, eq=False)
class LogLatticeField:
    """Complex samples of a function on a :class:`LogGrid`.

    ``values`` has shape ``grid.shape``; flattening in C order gives the
    lexicographic layout used by the file formats.  The array is made
    read-only on construction.
    """

    grid: LogGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.size != self.grid.size:
            raise ValueError(
                f"expected {self.grid.size} samples for this grid, got {vals.size}")
        vals = vals.reshape(self.grid.shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: LogGrid, func: Callable[..., np.ndarray],
                      log_coords: bool = False) -> "LogLatticeField":
        """Sample ``func(x_1, ..., x_n)`` (or ``func(u_1, ..., u_n)``) on the grid."""
        coords = grid.u_coords() if log_coords else grid.x_coords()
        return cls(grid, np.broadcast_to(func(*coords), grid.shape))

    @classmethod
    def zeros(cls, grid: LogGrid) -> "LogLatticeField":
        return cls(grid, np.zeros(grid.shape, dtype=complex))

    def with_values(self, values: np.ndarray) -> "LogLatticeField":
        return LogLatticeField(self.grid, values)

    def _coerce(self, other: "LogLatticeField") -> np.ndarray:
        if not isinstance(other, LogLatticeField):
            return NotImplemented
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        return other.values

    def __add__(self, other):
        vals = self._coerce(other)
        if vals is NotImplemented:
            return vals
        return self.with_values(self.values + vals)

    def __sub__(self, other):
        vals = self._coerce(other)
        if vals is NotImplemented:
            return vals
        return self.with_values(self.values - vals)

    def __mul__(self, c):
        if isinstance(c, LogLatticeField):
            return NotImplemented
        return self.with_values(self.values * complex(c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.with_values(self.values / complex(c))

    def __neg__(self):
        return self.with_values(-self.values)

    def flat(self) -> np.ndarray:
        """Values in lexicographic order."""
        return self.values.reshape(-1)

    def norm(self, p=2) -> float:
        return xp_norm(self, p)

    def edge_mass(self, fraction: float = 1 / 16) -> float:
        """Share of the ``X^2`` energy in the outer ``fraction`` of each axis.

        Large values mean the periodic wrap-around is visible and the window
        should be widened.
        """
        total = float(np.sum(np.abs(self.values) ** 2))
        if total == 0.0:
            return 0.0
        width = max(1, int(round(fraction * self.grid.count)))
        mask = np.zeros(self.grid.shape, dtype=bool)
        for ax in range(self.grid.dim):
            idx = [slice(None)] * self.grid.dim
            idx[ax] = np.r_[0:width, self.grid.count - width:self.grid.count]
            mask[tuple(idx)] = True
        return float(np.sum(np.abs(self.values[mask]) ** 2) / total)


def parse_exponent(p) -> float:
    """Turn ``p`` (number, ``"inf"``) into a float in ``[1, inf]``."""
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in ("inf", "infinity", "oo") else float(p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"exponent must lie in [1, inf], got {p}")
    return p


def _lp_of_values(values: np.ndarray, p: float, cell_volume: float) -> float:
    a = np.abs(values)
    if p == math.inf:
        return float(a.max()) if a.size else 0.0
    if p == 2:
        return float(math.sqrt(cell_volume * float(np.sum(a * a))))
    peak = float(a.max())
    if peak == 0.0:
        return 0.0
    # scale out the peak so high powers do not overflow
    return peak * float(cell_volume * np.sum((a / peak) ** p)) ** (1.0 / p)


def xp_norm(f: LogLatticeField, p=2) -> float:
    """``X^p`` norm: ``(h^n * sum |f|^p)^(1/p)``, or the lattice max for ``p = inf``."""
    return _lp_of_values(f.values, parse_exponent(p), f.grid.cell_volume)


def inner_product(f: LogLatticeField, g: LogLatticeField) -> complex:
    """``X^2`` inner product ``h^n * sum f * conj(g)``."""
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    return complex(f.grid.cell_volume * np.vdot(g.values, f.values))
