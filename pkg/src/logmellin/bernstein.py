"""Bernstein-Mellin and Paley-Wiener-Mellin spaces on the lattice.

Two notions of band limit coexist for ``n >= 2``: the box
``|xi_j| <= sigma`` (all mixed ``Theta`` inequalities hold) and the ball
``|xi| <= sigma`` (spectral support of ``sqrt(L)``).  Every routine says
which one it uses; :class:`BandSpec` carries the choice.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import zeta

from .grid import LogGrid, LogLatticeField, parse_exponent, xp_norm
from .report import Check, SmoothnessReport
from .spectral import apply_symbol, energy_density

__all__ = [
    "BandSpec",
    "band_mask",
    "pw_project",
    "bernstein_check",
    "TypeEstimate",
    "type_estimate",
    "favard",
    "favard_partial_sum",
    "ksm_constant",
    "kolmogorov_stein_check",
    "riesz_boas",
    "riesz_boas_symbol",
    "FejerKernel",
    "mollifier_project",
]


@dataclass(frozen=True)
class BandSpec:
    """Frequency band: ``box`` (``max_j |xi_j| <= sigma``) or ``ball`` (``|xi| <= sigma``).

    With ``annulus=(s1, s2)`` the band is ``s1 <= metric < s2`` instead.
    """

    shape: str = "ball"
    sigma: float = 1.0
    annulus: tuple[float, float] | None = None

    def __post_init__(self):
        if self.shape not in ("box", "ball"):
            raise ValueError(f"band shape must be 'box' or 'ball', got {self.shape!r}")
        if not self.sigma > 0:
            raise ValueError("band limit sigma must be positive")
        if self.annulus is not None:
            lo, hi = self.annulus
            if not 0 <= lo < hi:
                raise ValueError("annulus bounds must satisfy 0 <= s1 < s2")

    def metric(self, grid: LogGrid) -> np.ndarray:
        if self.shape == "ball":
            return grid.radial_frequency()
        return np.max(np.broadcast_arrays(*[np.abs(x) for x in grid.frequencies()]), axis=0)


# frequencies within this relative distance of the edge count as inside
_EDGE_RTOL = 1e-12


def band_mask(grid: LogGrid, band: BandSpec) -> np.ndarray:
    metric = band.metric(grid)
    if band.annulus is not None:
        lo, hi = band.annulus
        return (metric >= lo * (1 - _EDGE_RTOL)) & (metric < hi * (1 - _EDGE_RTOL))
    return metric <= band.sigma * (1 + _EDGE_RTOL)


def pw_project(f: LogLatticeField, band: BandSpec) -> LogLatticeField:
    """Orthogonal projection onto fields with spectrum inside ``band``."""
    return apply_symbol(f, band_mask(f.grid, band).astype(float))


def _mixed_theta_symbol(grid: LogGrid, powers) -> np.ndarray:
    sym = np.ones(grid.shape, dtype=complex)
    for xi, l in zip(grid.frequencies(), powers):
        if l:
            sym = sym * (1j * xi) ** l
    return sym


def _norms_for_symbols(f: LogLatticeField, symbols, p: float) -> list[float]:
    if p == 2:
        E = energy_density(f)
        return [math.sqrt(float(np.sum(E * np.abs(s) ** 2))) for s in symbols]
    return [xp_norm(apply_symbol(f, s), p) for s in symbols]


def bernstein_check(f: LogLatticeField, sigma: float, p=2, max_order: int = 4,
                    radial_orders=(0.5, 1, 2, 4), rtol: float = 1e-9) -> SmoothnessReport:
    """Check ``||Theta^l f||_p <= sigma^|l| ||f||_p`` for every multi-index ``|l| <= max_order``.

    For ``p = 2`` the radial inequalities ``||L^(s/2) f|| <= sigma^s ||f||`` are
    added for each ``s`` in ``radial_orders``.
    """
    p = parse_exponent(p)
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    rep = SmoothnessReport("bernstein", params={"sigma": sigma, "p": p, "max_order": max_order})
    base = xp_norm(f, p)
    n = f.grid.dim
    for order in range(1, max_order + 1):
        for powers in itertools.product(range(order + 1), repeat=n):
            if sum(powers) != order:
                continue
            lhs = _norms_for_symbols(f, [_mixed_theta_symbol(f.grid, powers)], p)[0]
            rep.add("Bernstein", f"Theta^{list(powers)}", lhs, sigma**order * base,
                    rtol=rtol, powers=list(powers))
    if p == 2:
        rad = f.grid.radial_frequency()
        E = energy_density(f)
        for s in radial_orders:
            lhs = math.sqrt(float(np.sum(E * rad ** (2 * s))))
            rep.add("Bern0", f"L^({s}/2)", lhs, sigma**s * base, rtol=rtol, order=s)
    # finiteness of sup_k sigma^-k ||Theta_j^k f|| (bounded by 1 inside the band)
    lem = []
    for j in range(n):
        powers = [0] * n
        vals = []
        for k in range(1, max_order + 1):
            powers[j] = k
            nk = _norms_for_symbols(f, [_mixed_theta_symbol(f.grid, powers)], p)[0]
            vals.append(nk / sigma**k)
        lem.append(max(vals) if vals else 0.0)
    rep.values["R(f,sigma)"] = lem
    for j, v in enumerate(lem):
        rep.add("Lem", f"sup_k sigma^-k ||Theta_{j + 1}^k f||", v, base, rtol=rtol)
    return rep


@dataclass
class TypeEstimate:
    """Result of :func:`type_estimate`.

    ``value`` is the ratio ``||A^k f|| / ||A^(k-1) f||`` at ``k = k_max``;
    ``roots`` holds ``||A^k f||^(1/k)`` (the defining sequence of the limit)
    and ``ratios`` the successive ratios for ``k = 1..k_max``.
    """

    value: float
    roots: np.ndarray
    ratios: np.ndarray
    log_norms: np.ndarray
    exponential_type: bool

    @property
    def root_value(self) -> float:
        return float(self.roots[-1])


def type_estimate(f: LogLatticeField, generator="radial", k_max: int = 64,
                  p=2, plateau_rtol: float = 0.02, floor: float = 1e-12) -> TypeEstimate:
    """Estimate the exponential type ``lim_k ||A^k f||^(1/k)``.

    ``generator`` is an axis index ``j`` (``A = Theta_j``) or ``"radial"``
    (``A = L^(1/2)``).  Norms are accumulated in log scale by normalizing
    after every application, so ``k_max`` in the hundreds is safe.

    The returned value is the ratio of consecutive norms, which has the
    same limit as the root sequence but converges geometrically instead of
    like ``c^(1/k)``.  ``exponential_type`` is False when the ratios still grow
    by more than ``plateau_rtol`` over the last quarter of the trace.

    Spectral coefficients below ``floor`` times the largest one are rounding
    noise from the transform; ``k_max`` powers of the symbol would amplify
    them past the true band edge, so they are zeroed first.
    """
    if int(k_max) != k_max or k_max < 4:
        raise ValueError("k_max must be an integer >= 4")
    p = parse_exponent(p)
    if generator == "radial":
        sym = f.grid.radial_frequency().astype(complex)
    else:
        ax = f.grid.check_axis(generator)
        sym = 1j * np.broadcast_to(f.grid.frequencies()[ax], f.grid.shape)
    base = xp_norm(f, p)
    if base == 0:
        raise ValueError("type of the zero field is undefined")
    g = f / base
    log_norms = [math.log(base)]
    F = np.fft.fftn(g.values)
    F = np.where(np.abs(F) > floor * np.abs(F).max(), F, 0)
    for _ in range(int(k_max)):
        F = F * sym
        nk = xp_norm(g.with_values(np.fft.ifftn(F)), p) if p != 2 else \
            math.sqrt(float(np.sum(np.abs(F) ** 2)) * f.grid.cell_volume / f.grid.size)
        if nk == 0:
            log_norms.append(-math.inf)
            break
        log_norms.append(log_norms[-1] + math.log(nk))
        F = F / nk
    log_norms = np.array(log_norms)
    ks = np.arange(1, log_norms.size)
    with np.errstate(invalid="ignore"):
        roots = np.exp(log_norms[1:] / ks)
        ratios = np.exp(np.diff(log_norms))
    if not np.isfinite(log_norms[-1]):
        # spectrum sits at zero frequency only
        return TypeEstimate(0.0, np.nan_to_num(roots), np.nan_to_num(ratios), log_norms, True)
    q = max(1, ratios.size // 4)
    growth = ratios[-1] / ratios[-1 - q] - 1 if ratios.size > q else 0.0
    return TypeEstimate(float(ratios[-1]), roots, ratios, log_norms,
                        bool(growth <= plateau_rtol))


def favard(j: int) -> float:
    """Favard constant ``K_j = (4/pi) sum_r (-1)^(r(j+1)) / (2r+1)^(j+1)``.

    Odd ``j`` sums ``sum 1/(2r+1)^s = (1 - 2^-s) zeta(s)``; even ``j`` is the
    Dirichlet beta function ``4^-s (zeta(s, 1/4) - zeta(s, 3/4))`` with
    ``beta(1) = pi/4``.
    """
    if int(j) != j or j < 0:
        raise ValueError("Favard index must be a nonnegative integer")
    s = int(j) + 1
    if j == 0:
        return 1.0
    if j % 2 == 1:
        total = (1 - 2.0**-s) * float(zeta(s))
    else:
        total = 4.0**-s * (float(zeta(s, 0.25)) - float(zeta(s, 0.75)))
    return 4 / math.pi * total


def favard_partial_sum(j: int, terms: int) -> tuple[float, float]:
    """Direct partial sum of the Favard series and a bound on the omitted tail."""
    s = int(j) + 1
    r = np.arange(terms, dtype=float)
    signs = (-1.0) ** (r * s)
    partial = 4 / math.pi * float(np.sum(signs / (2 * r + 1) ** s))
    if s % 2 == 1:
        # alternating with decreasing terms: tail below the first omitted term
        tail = 4 / math.pi / (2 * terms + 1) ** s
    else:
        tail = 4 / math.pi * (2 * terms - 1) ** (1 - s) / (2 * (s - 1))
    return partial, tail


def ksm_constant(k: int, m: int) -> float:
    """``C_{k,m} = K_{m-k}^m / K_m^(m-k)``."""
    return favard(m - k) ** m / favard(m) ** (m - k)


def kolmogorov_stein_check(f: LogLatticeField, k: int, m: int, generator="radial",
                           p=2, rtol: float = 1e-9) -> SmoothnessReport:
    """Check ``||A^k f||^m <= C_{k,m} ||A^m f||^k ||f||^(m-k)`` in log form.

    ``A`` is ``Theta_j`` for an axis ``generator`` or ``L^(1/2)`` for
    ``"radial"``.
    """
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    p = parse_exponent(p)
    if generator == "radial":
        base_sym = f.grid.radial_frequency().astype(complex)
        if p != 2:
            raise ValueError("the radial generator is used in X^2 only")
    else:
        ax = f.grid.check_axis(generator)
        base_sym = 1j * np.broadcast_to(f.grid.frequencies()[ax], f.grid.shape)
    nk, nm = _norms_for_symbols(f, [base_sym**k, base_sym**m], p)
    n0 = xp_norm(f, p)
    C = ksm_constant(k, m)
    rep = SmoothnessReport("kolmogorov-stein", params={"k": k, "m": m, "generator": generator,
                                                       "p": p})
    if n0 == 0:
        rep.add("KSM", f"k={k},m={m}", 0.0, 0.0)
        return rep
    # compare logarithms so high powers cannot overflow
    lhs = m * math.log(nk) if nk > 0 else -math.inf
    rhs = (math.log(C) + (k * math.log(nm) if nm > 0 else (-math.inf if k else 0.0))
           + (m - k) * math.log(n0))
    # lhs = -inf means A^k f = 0, where the inequality holds trivially
    ok = lhs == -math.inf or lhs <= rhs + rtol * max(1.0, abs(rhs))
    rep.values.update({"C": C, "lhs_log": lhs, "rhs_log": rhs,
                       "slack": math.exp(rhs - lhs) if np.isfinite(lhs) else math.inf})
    rep.checks.append(Check("KSM", f"k={k},m={m}", lhs, rhs, bool(ok), {"C": C}))
    return rep


def riesz_boas_symbol(lam: np.ndarray, sigma: float, K: int) -> np.ndarray:
    """Partial sum over ``k = 1-K..K`` of the Riesz-Boas series applied to ``exp(i t lam)``.

    Terms ``k`` and ``1-k`` are paired: together they give
    ``2i (-1)^(k-1) sin((k-1/2) pi lam / sigma) / (k-1/2)^2``.
    """
    lam = np.asarray(lam, dtype=float)
    out = np.zeros(lam.shape, dtype=complex)
    theta = np.pi * lam / sigma
    for k in range(1, int(K) + 1):
        c = k - 0.5
        out += (-1) ** (k - 1) / c**2 * 2j * np.sin(c * theta)
    return sigma / math.pi**2 * out


def riesz_boas(f: LogLatticeField, sigma: float, K: int, tol: float = 1e-10) -> LogLatticeField:
    """Riesz-Boas-Mellin partial sum, an approximation of ``i sqrt(L) f``.

    ``f`` must lie in ``PW_sigma(sqrt(L))``: spectral energy above ``sigma``
    beyond ``tol * ||f||`` is rejected.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if int(K) != K or K < 1:
        raise ValueError("K must be a positive integer")
    rad = f.grid.radial_frequency()
    E = energy_density(f)
    total = float(E.sum())
    outside = float(E[rad > sigma * (1 + _EDGE_RTOL)].sum())
    if total > 0 and math.sqrt(outside) > tol * math.sqrt(total):
        raise ValueError(
            f"field is not band-limited to |xi| <= {sigma}: "
            f"relative energy outside is {math.sqrt(outside / total):.3e}")
    return apply_symbol(f, riesz_boas_symbol(rad, sigma, K))


@dataclass(frozen=True)
class FejerKernel:
    """Fejer kernel of exponential type one: transform ``max(0, 1 - |omega|)``."""

    def transform(self, omega) -> np.ndarray:
        return np.clip(1 - np.abs(np.asarray(omega, dtype=float)), 0, None)


def mollifier_project(f: LogLatticeField, kernel, sigma: float, axes=None,
                      leak_tol: float = 1e-8) -> LogLatticeField:
    """``P_sigma f = int p(t_1)...p(t_n) U_1(t_1)...U_n(t_n) f dt`` on the chosen axes.

    ``kernel`` exposes ``transform(omega)``, the Fourier transform of an
    integrable type-one kernel; scaled to type ``sigma`` its symbol on axis
    ``j`` is ``transform(xi_j / sigma)``.  Kernels whose transform leaks
    beyond ``|omega| = 1`` by more than ``leak_tol`` are rejected.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    transform: Callable = kernel.transform if hasattr(kernel, "transform") else kernel
    probe = np.linspace(1 + 1e-9, 4, 2001)
    leak = float(np.max(np.abs(transform(np.r_[probe, -probe]))))
    if leak > leak_tol:
        raise ValueError(f"kernel transform leaks outside [-1, 1] (max {leak:.3e})")
    axes = range(1, f.grid.dim + 1) if axes is None else axes
    sym = np.ones(f.grid.shape, dtype=complex)
    freqs = f.grid.frequencies()
    for j in axes:
        ax = f.grid.check_axis(j)
        sym = sym * transform(freqs[ax] / sigma)
    return apply_symbol(f, sym)
