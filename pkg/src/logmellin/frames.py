"""Dyadic partitions of unity, Littlewood-Paley pieces and band frames.

The partition lives on the spectrum of ``L^(1/2)``, i.e. on ``lambda = |xi|``,
so band ``j`` occupies the annulus ``2^(j-1) <= |xi| <= 2^(j+1)`` and the
weight ``2^(j alpha)`` in the band Besov norm matches ``alpha`` orders of
smoothness.

Band frames are regular log-translates of one generator per band.  On the
lattice the frame operator of such a family is a Fourier multiplier as long
as no two in-band frequencies alias onto each other under the translate
stride; the frame bounds are then the extrema of the periodized squared
symbol, which we compute exactly.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from .grid import LogGrid, LogLatticeField, parse_exponent
from .io import FieldFileError

__all__ = [
    "DyadicPartition",
    "BandFrame",
    "FrameCoefficients",
    "build_partition",
    "lp_analyze",
    "lp_synthesize",
    "build_band_frame",
    "build_frames",
    "frame_analyze",
    "frame_reconstruct",
    "besov_from_bands",
    "besov_from_coeffs",
    "write_coefficients",
    "read_coefficients",
    "ConvergenceError",
]


class ConvergenceError(RuntimeError):
    """Raised when the band frame-operator solve misses its tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (relative residual {residual:.3e})")
        self.residual = residual


def _bump(x: np.ndarray, sharpness: float) -> np.ndarray:
    out = np.zeros_like(x, dtype=float)
    pos = x > 0
    out[pos] = np.exp(-1.0 / (sharpness * x[pos]))
    return out


def _smooth_step(t: np.ndarray, sharpness: float) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, monotone in between."""
    t = np.clip(t, -1.0, 2.0)
    a = _bump(t, sharpness)
    b = _bump(1.0 - t, sharpness)
    return a / (a + b)


@dataclass(frozen=True)
class DyadicPartition:
    """Quadratic dyadic partition ``sum_j F_j(lambda)^2 = 1`` on ``0 <= lambda <= 2^J_max``."""

    sharpness: float
    J_max: int
    grid: LogGrid | None = None

    def g(self, lam) -> np.ndarray:
        """Plateau profile: 1 on [0, 1], smooth descent on [1, 2], 0 beyond."""
        lam = np.abs(np.asarray(lam, dtype=float))
        return 1.0 - _smooth_step(lam - 1.0, self.sharpness)

    def h(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        return self.g(lam) - self.g(2.0 * lam)

    def G(self, j: int, lam) -> np.ndarray:
        """Squared partition function ``G_j = F_j^2``."""
        if j < 0 or j > self.J_max:
            raise ValueError(f"band index must be in 0..{self.J_max}, got {j}")
        if j == 0:
            return self.g(lam)
        return self.h(np.asarray(lam, dtype=float) / 2.0**j)

    def F(self, j: int, lam) -> np.ndarray:
        # clip guards tiny negative rounding in g(x) - g(2x)
        return np.sqrt(np.clip(self.G(j, lam), 0.0, None))

    @property
    def bands(self) -> range:
        return range(self.J_max + 1)

    def annulus(self, j: int) -> tuple[float, float]:
        """Half-open spectral annulus ``[lo, hi)`` containing the support of ``F_j``."""
        return (0.0 if j == 0 else 2.0 ** (j - 1), 2.0 ** (j + 1))

    def symbols(self, grid: LogGrid | None = None) -> list[np.ndarray]:
        grid = self._grid(grid)
        lam = grid.radial_frequency()
        return [self.F(j, lam) for j in self.bands]

    def _grid(self, grid):
        grid = grid if grid is not None else self.grid
        if grid is None:
            raise ValueError("partition is not bound to a grid")
        return grid


def build_partition(sharpness: float = 1.0, grid: LogGrid | None = None,
                    J_max: int | None = None) -> DyadicPartition:
    """Build the partition for ``grid``.

    ``J_max`` defaults to the smallest index with ``2^J_max`` at or above the
    largest lattice ``|xi|``, so the partition sums to one on the whole
    lattice spectrum (and a fortiori ``2^(J_max+1)`` exceeds it).
    """
    if not (math.isfinite(sharpness) and sharpness > 0):
        raise ValueError(f"sharpness must be positive, got {sharpness}")
    if J_max is None:
        if grid is None:
            raise ValueError("need a grid or an explicit J_max")
        J_max = max(0, math.ceil(math.log2(grid.spectral_radius)))
    if int(J_max) != J_max or J_max < 0:
        raise ValueError(f"J_max must be a non-negative integer, got {J_max}")
    return DyadicPartition(float(sharpness), int(J_max), grid)


def _fft_apply(f: LogLatticeField, symbol: np.ndarray) -> LogLatticeField:
    return f.with_values(np.fft.ifftn(np.fft.fftn(f.values) * symbol))


def lp_analyze(f: LogLatticeField, P: DyadicPartition) -> list[LogLatticeField]:
    """Band pieces ``F_j(L^(1/2)) f`` for ``j = 0..J_max``."""
    F = np.fft.fftn(f.values)
    return [f.with_values(np.fft.ifftn(F * s)) for s in P.symbols(f.grid)]


def lp_synthesize(bands: list[LogLatticeField], P: DyadicPartition) -> LogLatticeField:
    """``sum_j F_j(L^(1/2)) b_j``; inverts :func:`lp_analyze`."""
    if len(bands) != P.J_max + 1:
        raise ValueError(f"expected {P.J_max + 1} bands, got {len(bands)}")
    grid = bands[0].grid
    acc = np.zeros(grid.shape, dtype=complex)
    for b, s in zip(bands, P.symbols(grid)):
        if b.grid != grid:
            raise ValueError("bands live on different grids")
        acc += np.fft.fftn(b.values) * s
    return LogLatticeField(grid, np.fft.ifftn(acc))


# ---------------------------------------------------------------------------
# band frames


def _stride(grid: LogGrid, j: int, oversampling: float) -> int:
    """Largest power-of-two translate stride resolving band ``j`` at the given oversampling."""
    limit = math.pi / (2.0 ** (j + 1) * grid.step * oversampling)
    q = 1
    while 2 * q <= limit and grid.count % (2 * q) == 0:
        q *= 2
    return q


def _taper(grid: LogGrid, j: int, kind: str) -> np.ndarray:
    lam = grid.radial_frequency()
    lo, hi = (0.0 if j == 0 else 2.0 ** (j - 1)), 2.0 ** (j + 1)
    inside = (lam >= lo) & (lam < hi)
    if kind == "flat":
        return inside.astype(float)
    if kind != "cosine":
        raise ValueError(f"unknown taper {kind!r}")
    # mu in [-1, 1] across the annulus; cos(pi mu / 4) in [1/sqrt 2, 1]
    ref = max(2.0**j, 1.0)
    mu = np.log2(np.clip(lam, ref / 2.0, 2.0 * ref) / ref)
    return np.where(inside, np.cos(np.pi * mu / 4.0), 0.0)


def _alias_classes(grid: LogGrid, q: int) -> np.ndarray:
    """Integer label of the alias class of every frequency bin under stride ``q``."""
    K = grid.count // q
    idx = np.indices(grid.shape) % K
    label = np.zeros(grid.shape, dtype=np.int64)
    for ax in range(grid.dim):
        label = label * K + idx[ax]
    return label


def _periodized_bounds(grid: LogGrid, q: int, weight: np.ndarray, mask: np.ndarray):
    """Exact frame bounds of stride-``q`` translates with squared symbol ``weight``.

    ``weight`` is the pointwise frame-operator symbol, already normalized.  If
    two in-band frequencies share an alias class the operator is singular on
    the band, so the lower bound is 0 and the offending frequency is returned.
    """
    labels = _alias_classes(grid, q)[mask]
    counts = np.bincount(labels, minlength=(grid.count // q) ** grid.dim)
    if np.any(counts > 1):
        bad = int(np.flatnonzero(counts > 1)[0])
        where = np.flatnonzero(mask.ravel())[labels == bad][1]
        coords = np.unravel_index(where, grid.shape)
        xi = tuple(float(grid.freq_axis()[c]) for c in coords)
        return 0.0, float(np.max(weight[mask])), xi
    vals = weight[mask]
    return float(np.min(vals)), float(np.max(vals)), None


@dataclass(eq=False)
class BandFrame:
    """Stride-``q`` log-translates ``Phi_k(u) = phi(u - k q h)`` of one band generator."""

    j: int
    grid: LogGrid
    stride: int
    generator_hat: np.ndarray
    a: float
    b: float
    taper: str = "cosine"
    _dual_hat: np.ndarray | None = field(default=None, repr=False)

    @property
    def K(self) -> int:
        return (self.grid.count // self.stride) ** self.grid.dim

    @property
    def coeff_shape(self) -> tuple[int, ...]:
        return (self.grid.count // self.stride,) * self.grid.dim

    @property
    def mask(self) -> np.ndarray:
        lam = self.grid.radial_frequency()
        lo = 0.0 if self.j == 0 else 2.0 ** (self.j - 1)
        return (lam >= lo) & (lam < 2.0 ** (self.j + 1))

    @property
    def generator(self) -> LogLatticeField:
        return LogLatticeField(self.grid, np.fft.ifftn(self.generator_hat))

    def atom(self, k) -> LogLatticeField:
        k = np.atleast_1d(np.asarray(k)).ravel()
        if k.size == 1 and self.grid.dim > 1:
            k = np.array(np.unravel_index(int(k[0]), self.coeff_shape))
        vals = np.fft.ifftn(self.generator_hat)
        return LogLatticeField(self.grid, np.roll(vals, tuple(int(c) * self.stride for c in k),
                                                  axis=tuple(range(self.grid.dim))))

    @property
    def atoms(self) -> list[LogLatticeField]:
        return [self.atom(k) for k in range(self.K)]

    # the three band operators, all on raw value arrays
    def analysis(self, values: np.ndarray) -> np.ndarray:
        """``c_k = <v, Phi_k>`` via FFT correlation and subsampling."""
        corr = np.fft.ifftn(np.fft.fftn(values) * np.conj(self.generator_hat))
        sl = (slice(None, None, self.stride),) * self.grid.dim
        return self.grid.cell_volume * corr[sl]

    def synthesis(self, coeffs: np.ndarray) -> np.ndarray:
        """``sum_k c_k Phi_k``."""
        up = np.zeros(self.grid.shape, dtype=complex)
        up[(slice(None, None, self.stride),) * self.grid.dim] = np.asarray(coeffs).reshape(self.coeff_shape)
        return np.fft.ifftn(np.fft.fftn(up) * self.generator_hat)

    def frame_operator(self, values: np.ndarray) -> np.ndarray:
        return self.synthesis(self.analysis(values))

    def solve(self, rhs: np.ndarray, rtol: float = 1e-10, maxiter: int | None = None) -> np.ndarray:
        """Solve ``S u = rhs`` on the band by conjugate gradients."""
        n = self.grid.size
        shape = self.grid.shape
        op = LinearOperator((n, n), dtype=complex,
                            matvec=lambda v: self.frame_operator(v.reshape(shape)).ravel())
        rhs = np.asarray(rhs, dtype=complex).ravel()
        norm = np.linalg.norm(rhs)
        if norm == 0:
            return np.zeros(shape, dtype=complex)
        maxiter = maxiter if maxiter is not None else 10 * self.K
        u, info = cg(op, rhs, rtol=rtol, atol=0.0, maxiter=maxiter)
        res = np.linalg.norm(op.matvec(u) - rhs) / norm
        if info != 0 and res > rtol:
            raise ConvergenceError(f"band {self.j} frame solve did not converge in {maxiter} steps", res)
        return u.reshape(shape)

    @property
    def dual_generator_hat(self) -> np.ndarray:
        if self._dual_hat is None:
            psi = self.solve(np.fft.ifftn(self.generator_hat))
            self._dual_hat = np.fft.fftn(psi) * self.mask
        return self._dual_hat

    def dual_atom(self, k) -> LogLatticeField:
        dual = BandFrame(self.j, self.grid, self.stride, self.dual_generator_hat, 0.0, 0.0)
        return dual.atom(k)

    def _weight(self, hat: np.ndarray) -> np.ndarray:
        return np.abs(hat) ** 2 * (self.K * self.grid.cell_volume / self.grid.size)

    def dual_bounds(self) -> tuple[float, float]:
        a, b, _ = _periodized_bounds(self.grid, self.stride, self._weight(self.dual_generator_hat), self.mask)
        return a, b

    def rayleigh(self, f: LogLatticeField) -> float:
        """``sum_k |<f, Phi_k>|^2 / ||f||^2``."""
        c = self.analysis(f.values)
        return float(np.sum(np.abs(c) ** 2)) / f.norm() ** 2

    def summary(self) -> dict:
        return {"j": self.j, "K_j": self.K, "stride": self.stride, "a": self.a, "b": self.b}


def build_band_frame(j: int, P: DyadicPartition, oversampling: float = 2.0,
                     taper: str = "cosine", grid: LogGrid | None = None) -> BandFrame:
    """Translate frame for band ``j``.

    The generator symbol is the annulus indicator times a taper (``"cosine"``
    gives ``b/a <= 2``, ``"flat"`` a tight frame with ``a = b = 1``).  Its
    scale makes the frame-operator symbol equal the squared taper, so the
    measured bounds are the taper extrema over the in-band lattice.
    """
    grid = P._grid(grid)
    if not 0 <= j <= P.J_max:
        raise ValueError(f"band index must be in 0..{P.J_max}, got {j}")
    if not (math.isfinite(oversampling) and oversampling > 0):
        raise ValueError(f"oversampling must be positive, got {oversampling}")
    q = _stride(grid, j, oversampling)
    K = (grid.count // q) ** grid.dim
    scale = math.sqrt(grid.size / (grid.cell_volume * K))
    sym = _taper(grid, j, taper)
    hat = scale * sym
    frame = BandFrame(j, grid, q, hat, 0.0, 0.0, taper)
    mask = frame.mask
    if not np.any(mask):
        return frame  # empty band on this lattice: zero operator, vacuous bounds
    a, b, gap = _periodized_bounds(grid, q, frame._weight(hat), mask)
    if a <= 0:
        raise ValueError(f"band {j}: stride {q} aliases in-band frequencies; "
                         f"lower frame bound is 0 (gap at xi = {gap})")
    frame.a, frame.b = a, b
    return frame


def build_frames(P: DyadicPartition, oversampling: float = 2.0, taper: str = "cosine",
                 grid: LogGrid | None = None) -> list[BandFrame]:
    return [build_band_frame(j, P, oversampling, taper, grid) for j in P.bands]


def _check_coverage(frames: list[BandFrame], P: DyadicPartition | None):
    idx = [fr.j for fr in frames]
    need = list(range(P.J_max + 1)) if P is not None else list(range(len(frames)))
    if idx != need:
        raise ValueError(f"frames must cover bands {need}, got {idx}")


@dataclass
class FrameCoefficients:
    """Band-major coefficient table; ``bands[j]`` has shape ``frames[j].coeff_shape``."""

    bands: list[np.ndarray]

    def energy(self, j: int | None = None) -> float:
        if j is not None:
            return float(np.sum(np.abs(self.bands[j]) ** 2))
        return float(sum(np.sum(np.abs(c) ** 2) for c in self.bands))

    def rows(self):
        for j, c in enumerate(self.bands):
            for k, v in enumerate(np.asarray(c).ravel()):
                yield j, k, complex(v)


def frame_analyze(f: LogLatticeField, frames: list[BandFrame],
                  P: DyadicPartition) -> FrameCoefficients:
    """Coefficients ``<f, F_j(L^(1/2)) Phi^j_k>`` of the global frame."""
    _check_coverage(frames, P)
    return FrameCoefficients([fr.analysis(b.values) for fr, b in zip(frames, lp_analyze(f, P))])


def frame_reconstruct(coeffs: FrameCoefficients, frames: list[BandFrame],
                      P: DyadicPartition, rtol: float = 1e-10) -> LogLatticeField:
    """Canonical-dual reconstruction: per band ``u_j = S_j^{-1} T_j^* c_j``, then ``sum F_j u_j``."""
    _check_coverage(frames, P)
    if len(coeffs.bands) != len(frames):
        raise ValueError("coefficient table does not match the frame list")
    grid = frames[0].grid
    pieces = [LogLatticeField(grid, fr.solve(fr.synthesis(c), rtol=rtol))
              for fr, c in zip(frames, coeffs.bands)]
    return lp_synthesize(pieces, P)


def _lq(terms: np.ndarray, q) -> float:
    q = parse_exponent(q)
    terms = np.asarray(terms, dtype=float)
    if terms.size == 0:
        return 0.0
    if math.isinf(q):
        return float(np.max(terms))
    return float(np.sum(terms**q) ** (1.0 / q))


def besov_from_bands(f: LogLatticeField, P: DyadicPartition, alpha: float, q=2) -> float:
    """``(sum_j (2^(j alpha) ||F_j f||)^q)^(1/q)``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    norms = np.array([b.norm() for b in lp_analyze(f, P)])
    return _lq(2.0 ** (alpha * np.arange(norms.size)) * norms, q)


def besov_from_coeffs(coeffs: FrameCoefficients, alpha: float, q=2) -> float:
    """``(sum_j 2^(j alpha q) (sum_k |c_jk|^2)^(q/2))^(1/q)``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    e = np.sqrt([coeffs.energy(j) for j in range(len(coeffs.bands))])
    return _lq(2.0 ** (alpha * np.arange(e.size)) * e, q)


def write_coefficients(coeffs: FrameCoefficients, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "k", "re", "im"])
        for j, k, v in coeffs.rows():
            w.writerow([j, k, repr(v.real), repr(v.imag)])


def read_coefficients(path, frames: list[BandFrame]) -> FrameCoefficients:
    bands = [np.zeros(fr.K, dtype=complex) for fr in frames]
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["j", "k", "re", "im"]:
                raise FieldFileError(f"{path}: bad coefficient header {header}")
            for row in reader:
                try:
                    j, k = int(row[0]), int(row[1])
                    v = complex(float(row[2]), float(row[3]))
                except (ValueError, IndexError):
                    raise FieldFileError(f"{path}: bad coefficient row {row}") from None
                if not (0 <= j < len(bands) and 0 <= k < bands[j].size):
                    raise FieldFileError(
                        f"{path}: coefficient index ({j}, {k}) outside the frame family")
                bands[j][k] = v
    except FieldFileError:
        raise
    except OSError as exc:
        raise FieldFileError(f"cannot read {path}: {exc.strerror}") from None
    return FrameCoefficients([b.reshape(fr.coeff_shape) for b, fr in zip(bands, frames)])
