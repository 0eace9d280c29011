"""Moduli of continuity, K-functional estimates and Besov-Mellin norms.

All functionals here are built from Mellin translations, which act on the
spectrum as phase factors.  For ``p = 2`` the norms of iterated differences
are therefore weighted sums of the spectral energy and are evaluated in
closed form on the whole ``tau`` grid at once; other exponents go through
the inverse transform for each ``tau``.

Integrals ``int_0^inf (...) ds/s`` are discretized on a dyadic
:class:`ScaleLadder` with trapezoid weights in ``log s``.  Below the ladder
the integrand is continued as the power law implied by the modulus order,
above it as the ``s^-alpha`` decay of a saturated modulus; both tails are
added in closed form.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .grid import LogGrid, LogLatticeField, parse_exponent, xp_norm
from .spectral import apply_symbol, energy_density

__all__ = [
    "SmoothnessParams",
    "ScaleLadder",
    "default_ladder",
    "tau_grid",
    "modulus",
    "mixed_modulus",
    "modulus_L",
    "hardy_steklov",
    "hardy_steklov_symbol",
    "sobolev_norm",
    "k_upper",
    "k_exact2",
    "besov_norm",
    "ladder_integral",
    "BESOV_FORMS",
]

BESOV_FORMS = ("modulus", "zygmund", "mixed", "K", "laplace")

DEFAULT_N_TAU = 4  # sample points per octave of tau


@dataclass(frozen=True)
class SmoothnessParams:
    """Norm/modulus parameters ``(p, q, alpha, r, m, sigma, s)``."""

    p: float = 2.0
    q: float = 2.0
    alpha: float = 0.5
    r: int = 2
    m: int = 1
    sigma: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "p", parse_exponent(self.p))
        object.__setattr__(self, "q", parse_exponent(self.q))
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        for name in ("r", "m"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not (self.sigma > 0 and self.s > 0):
            raise ValueError("sigma and s must be positive")


@dataclass(frozen=True)
class ScaleLadder:
    """Dyadic scales ``s_nu = 2**nu`` for ``nu_min <= nu <= nu_max``."""

    nu_min: int
    nu_max: int

    def __post_init__(self):
        if not self.nu_min < self.nu_max:
            raise ValueError("ladder needs nu_min < nu_max")

    @property
    def nus(self) -> np.ndarray:
        return np.arange(self.nu_min, self.nu_max + 1)

    @property
    def scales(self) -> np.ndarray:
        return 2.0 ** self.nus.astype(float)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid weights of ``ds/s`` in log scale."""
        w = np.full(self.nus.size, math.log(2.0))
        w[0] *= 0.5
        w[-1] *= 0.5
        return w


def default_ladder(grid: LogGrid) -> ScaleLadder:
    """From the lattice step up to the window length."""
    return ScaleLadder(math.ceil(math.log2(grid.step)), math.ceil(math.log2(grid.period)))


def tau_grid(s: float, n_tau: int = DEFAULT_N_TAU, floor: float | None = None) -> np.ndarray:
    """Points ``s 2^(-k/n_tau)`` for discretized sups over ``(0, s]``.

    With ``floor`` set, the points run down to ``floor`` and ``min(s, floor)``
    is added.  Callers pass the scale below which every difference symbol is
    increasing in ``tau`` (``|tau xi| <= pi`` on the whole lattice), so the sup
    over ``(0, floor]`` is attained at ``floor`` and the sampled sup is
    nondecreasing in ``s`` for scale ratios ``2^(k/n_tau)``.  Without a floor
    the grid spans eight octaves below ``s``.
    """
    if s < 0:
        raise ValueError("scale must be nonnegative")
    if s == 0:
        return np.zeros(1)
    if n_tau < 1:
        return np.array([s])
    if floor is None:
        return s * 2.0 ** (-np.arange(8 * n_tau, -1, -1) / n_tau)
    if floor <= 0:
        raise ValueError("floor must be positive")
    k_max = max(0, math.floor(n_tau * math.log2(s / floor) + 1e-9))
    pts = s * 2.0 ** (-np.arange(k_max, -1, -1) / n_tau)
    return np.unique(np.concatenate(([min(s, floor)], pts[pts >= floor])))


def _axis_floor(grid: LogGrid) -> float:
    """Largest ``tau`` with ``|tau xi| <= pi`` for every lattice frequency."""
    return float(np.pi / np.max(np.abs(grid.freq_axis())))


def _check_order(name: str, value: int) -> int:
    if int(value) != value or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")
    return int(value)


def _marginal_energy(f: LogLatticeField, axes: tuple[int, ...]) -> np.ndarray:
    """Spectral energy summed over every axis not listed (0-based, sorted)."""
    E = energy_density(f)
    others = tuple(a for a in range(f.grid.dim) if a not in axes)
    return E.sum(axis=others) if others else E


def _diff_factor(xi: np.ndarray, taus: np.ndarray, m: int) -> np.ndarray:
    """``|exp(i xi tau) - 1|^(2m)`` as a ``(len(taus), len(xi))`` table."""
    return (2.0 * np.abs(np.sin(np.outer(taus, xi) / 2.0))) ** (2 * m)


def modulus(f: LogLatticeField, j: int, m: int, s: float, p=2,
            n_tau: int = DEFAULT_N_TAU) -> float:
    """``omega^m_{j,p}(s, f) = sup_{0<=tau<=s} ||(U_j(tau) - I)^m f||_p``."""
    ax = f.grid.check_axis(j)
    m = _check_order("difference order m", m)
    p = parse_exponent(p)
    if s < 0:
        raise ValueError("scale must be nonnegative")
    if s == 0:
        return 0.0
    taus = tau_grid(s, n_tau, _axis_floor(f.grid))
    xi = f.grid.freq_axis()
    if p == 2:
        E = _marginal_energy(f, (ax,))
        vals = _diff_factor(xi, taus, m) @ E
        return float(math.sqrt(max(vals.max(), 0.0)))
    xib = f.grid.frequencies()[ax]
    best = 0.0
    for tau in taus:
        g = apply_symbol(f, (np.exp(1j * xib * tau) - 1) ** m)
        best = max(best, xp_norm(g, p))
    return best


def _multiset_sup(f: LogLatticeField, axes: tuple[int, ...], taus: np.ndarray,
                  p: float, order: int = 1) -> float:
    """Sup over independent ``tau_i`` of ``||prod_i (U_{axes_i}(tau_i) - I)^order f||_p``."""
    xi = f.grid.freq_axis()
    if p == 2:
        uniq = tuple(sorted(set(axes)))
        E = _marginal_energy(f, uniq)
        A = _diff_factor(xi, taus, order)
        letters = "abcdefghijklmnopqrstuvwxyz"
        freq_letter = {a: letters[k] for k, a in enumerate(uniq)}
        tau_letters = [letters[len(uniq) + i].upper() for i in range(len(axes))]
        operands = [E]
        subs = ["".join(freq_letter[a] for a in uniq)]
        for i, a in enumerate(axes):
            operands.append(A)
            subs.append(tau_letters[i] + freq_letter[a])
        expr = ",".join(subs) + "->" + "".join(tau_letters)
        vals = np.einsum(expr, *operands, optimize=True)
        return float(math.sqrt(max(float(vals.max()), 0.0)))
    freqs = f.grid.frequencies()
    F = np.fft.fftn(f.values)
    best = 0.0
    for idx in itertools.product(range(len(taus)), repeat=len(axes)):
        sym = 1.0
        for a, i in zip(axes, idx):
            sym = sym * (np.exp(1j * freqs[a] * taus[i]) - 1) ** order
        g = f.with_values(np.fft.ifftn(F * sym))
        best = max(best, xp_norm(g, p))
    return best


def _axis_multisets(n: int, r: int):
    """Sorted axis multisets of size ``r`` with the number of ordered tuples each stands for."""
    for combo in itertools.combinations_with_replacement(range(n), r):
        count = math.factorial(r)
        for c in Counter(combo).values():
            count //= math.factorial(c)
        yield combo, count


def mixed_modulus(f: LogLatticeField, r: int, s: float, p=2,
                  n_tau: int | None = None) -> float:
    """Mixed modulus ``Omega^r_p(s, f)``.

    Sum over ordered axis tuples ``(j_1, ..., j_r)`` of the sup over
    independent ``0 <= tau_i <= s`` of the iterated first differences.  The
    operators commute, so tuples that are permutations of each other share
    one value.
    """
    r = _check_order("order r", r)
    p = parse_exponent(p)
    if s < 0:
        raise ValueError("scale must be nonnegative")
    if s == 0:
        return 0.0
    if n_tau is None:
        n_tau = DEFAULT_N_TAU if r <= 2 or p == 2 else 8
    taus = tau_grid(s, n_tau, _axis_floor(f.grid))
    total = 0.0
    for axes, count in _axis_multisets(f.grid.dim, r):
        total += count * _multiset_sup(f, axes, taus, p)
    return total


def modulus_L(f: LogLatticeField, r: int, s: float, n_tau: int = DEFAULT_N_TAU) -> float:
    """``sup_{0<=tau<=s} ||(exp(i tau L) - I)^r f||_2``."""
    r = _check_order("order r", r)
    if s < 0:
        raise ValueError("scale must be nonnegative")
    if s == 0:
        return 0.0
    lam = f.grid.radial_frequency().reshape(-1) ** 2
    taus = tau_grid(s, n_tau, float(np.pi / lam.max()))
    E = energy_density(f).reshape(-1)
    vals = _diff_factor(lam, taus, r) @ E
    return float(math.sqrt(max(vals.max(), 0.0)))


def _steklov_1d(z: np.ndarray) -> np.ndarray:
    """Average of ``exp(i z v)`` over ``v`` in ``[0, 1]``: ``(exp(iz) - 1)/(iz)``."""
    return np.exp(0.5j * z) * np.sinc(z / (2 * np.pi))


def hardy_steklov_symbol(grid: LogGrid, r: int, s: float) -> np.ndarray:
    """Spectral symbol of the Hardy-Steklov-Mellin operator ``P_r(s)``.

    Per axis: ``sum_k (-1)^(k+1) C(r,k) [(exp(i k xi s/r) - 1)/(i k xi s/r)]^r``,
    the ``r``-fold average over ``[0, s/r]^r`` of the combination of
    translates ``U_j(k (tau_1 + ... + tau_r))``.  Constants are preserved.
    """
    sym = np.ones(grid.shape, dtype=complex)
    for xi in grid.frequencies():
        axis_sym = np.zeros(xi.shape, dtype=complex)
        for k in range(1, r + 1):
            axis_sym = axis_sym + (-1) ** (k + 1) * math.comb(r, k) \
                * _steklov_1d(k * xi * s / r) ** r
        sym = sym * axis_sym
    return sym


def hardy_steklov(f: LogLatticeField, r: int, s: float) -> LogLatticeField:
    """Apply ``P_r(s) = P_{1,r}(s) ... P_{n,r}(s)``; tends to the identity as ``s -> 0``."""
    r = _check_order("order r", r)
    if not s > 0:
        raise ValueError("scale must be positive")
    return apply_symbol(f, hardy_steklov_symbol(f.grid, r, s))


def _multi_indices(n: int, k: int):
    """Multi-indices ``alpha`` in ``N^n`` with ``|alpha| = k``."""
    for combo in itertools.combinations_with_replacement(range(n), k):
        alpha = [0] * n
        for a in combo:
            alpha[a] += 1
        yield tuple(alpha)


def _theta_symbol(grid: LogGrid, alpha) -> np.ndarray:
    sym = np.ones(grid.shape, dtype=complex)
    for xi, a in zip(grid.frequencies(), alpha):
        if a:
            sym = sym * (1j * xi) ** a
    return sym


def _symbol_norms(f: LogLatticeField, symbols, p: float) -> list[float]:
    if p == 2:
        E = energy_density(f)
        return [math.sqrt(float(np.sum(E * np.abs(s) ** 2))) for s in symbols]
    return [xp_norm(apply_symbol(f, s), p) for s in symbols]


def sobolev_norm(f: LogLatticeField, k: int, p=2, variant: str = "multi") -> float:
    """Sobolev-Mellin norm of order ``k``.

    ``variant="multi"``: ``||f|| + sum_{|alpha|=k} ||Theta^alpha f||``.
    ``variant="tuple"``: ``||f|| + sum_{i=1..k} sum_{j_1..j_i} ||Theta_{j_1}...Theta_{j_i} f||``
    over ordered tuples, the equivalent norm built from all lower orders.
    ``k = 0`` gives the ``X^p`` norm.
    """
    if int(k) != k or k < 0:
        raise ValueError("order must be a nonnegative integer")
    p = parse_exponent(p)
    base = xp_norm(f, p)
    if k == 0:
        return base
    n = f.grid.dim
    if variant == "multi":
        symbols = [_theta_symbol(f.grid, a) for a in _multi_indices(n, k)]
        return base + sum(_symbol_norms(f, symbols, p))
    if variant == "tuple":
        total = base
        for order in range(1, k + 1):
            for axes, count in _axis_multisets(n, order):
                alpha = [0] * n
                for a in axes:
                    alpha[a] += 1
                total += count * _symbol_norms(f, [_theta_symbol(f.grid, alpha)], p)[0]
        return total
    raise ValueError(f"unknown Sobolev norm variant {variant!r}")


def _sobolev_weight(grid: LogGrid, r: int) -> np.ndarray:
    w = np.ones(grid.shape)
    for a in _multi_indices(grid.dim, r):
        w = w + np.abs(_theta_symbol(grid, a))
    return w


def k_upper(f: LogLatticeField, r: int, t: float, p=2,
            scale_factors=(0.25, 0.5, 1.0, 2.0, 4.0)) -> float:
    """Upper estimate of ``K(t^r, f; X^p, W^r_p)``.

    Every candidate is an admissible splitting ``f = f0 + f1`` so the minimum
    is a certified upper bound.  Candidates: the two trivial splittings,
    ``f1 = P_r(s) f`` with ``s = c * t``, and two spectral families built on
    the Sobolev weight ``w``: the sharp cutoff ``f1_hat = 1[T w <= c] f_hat``
    and the smooth one ``f1_hat = f_hat / (1 + (T w / c)^2)`` with
    ``T = t^r``.  The smooth family contains the minimizer of the quadratic
    functional behind :func:`k_exact2`.
    """
    r = _check_order("order r", r)
    p = parse_exponent(p)
    if not t > 0:
        raise ValueError("t must be positive")
    T = t**r
    best = min(xp_norm(f, p), T * sobolev_norm(f, r, p))

    def consider(f1):
        nonlocal best
        best = min(best, xp_norm(f - f1, p) + T * sobolev_norm(f1, r, p))

    for c in scale_factors:
        consider(hardy_steklov(f, r, c * t))
    F = np.fft.fftn(f.values)
    Tw = T * _sobolev_weight(f.grid, r)
    for c in scale_factors:
        consider(f.with_values(np.fft.ifftn(np.where(Tw <= c, F, 0))))
        consider(f.with_values(np.fft.ifftn(F / (1 + (Tw / c) ** 2))))
    return best


def k_exact2(f: LogLatticeField, r: int, t: float) -> float:
    """Quadratic K-functional at parameter ``t^r`` for ``(X^2, W^r_2)``.

    ``K_2^2 = sum |f_hat|^2 T^2 w^2 / (1 + T^2 w^2)`` with ``T = t^r`` and
    Sobolev weight ``w = 1 + sum_{|alpha|=r} |xi^alpha|``.  It minimizes
    ``||f0||^2 + T^2 ||f1||_w^2`` exactly and never exceeds the true
    K-functional.
    """
    r = _check_order("order r", r)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 0.0
    T = t**r
    tw2 = (T * _sobolev_weight(f.grid, r)) ** 2
    return math.sqrt(float(np.sum(energy_density(f) * tw2 / (1 + tw2))))


def ladder_integral(g: np.ndarray, ladder: ScaleLadder, q: float,
                    low_exp: float, high_exp: float) -> float:
    """``(int_0^inf g(s)^q ds/s)^(1/q)`` from samples on the ladder.

    ``g`` is continued as ``s^low_exp`` below and ``s^-high_exp`` above the
    ladder.  ``q = inf`` gives the max of the samples.
    """
    g = np.asarray(g, dtype=float)
    if q == math.inf:
        return float(g.max())
    body = float(np.sum(ladder.weights * g**q))
    tails = g[0] ** q / (q * low_exp) + g[-1] ** q / (q * high_exp)
    return (body + tails) ** (1.0 / q)


def _ordered_tuple_groups(n: int, k: int):
    if k == 0:
        yield (), 1
        return
    yield from _axis_multisets(n, k)


def besov_norm(f: LogLatticeField, params: SmoothnessParams,
               ladder: ScaleLadder | None = None, form: str = "mixed",
               n_tau: int = DEFAULT_N_TAU) -> float:
    """Besov-Mellin norm of ``f`` in one of five equivalent forms.

    ``modulus``
        ``||f||_{W^[a]} + sum_tuples (int (s^([a]-a) Omega^1(s, Theta..f))^q ds/s)^(1/q)``,
        non-integer ``alpha``.
    ``zygmund``
        ``||f||_{W^(k-1)} + sum_tuples (int (s^-1 Omega^2(s, Theta..f))^q ds/s)^(1/q)``,
        integer ``alpha = k``.
    ``mixed``
        ``||f|| + (int (s^-alpha Omega^r(s, f))^q ds/s)^(1/q)``, ``alpha < r``.
    ``K``
        as ``mixed`` with ``Omega^r`` replaced by ``k_upper(f, r, s)``.
    ``laplace``
        ``||f||_2 + (int (tau^(-alpha/2) w^r(tau, f; L))^q dtau/tau)^(1/q)`` with the
        modulus of ``exp(i tau L)``; ``L`` has order two so ``tau = s^2``.
    """
    if form not in BESOV_FORMS:
        raise ValueError(f"unknown Besov form {form!r}; choose from {BESOV_FORMS}")
    ladder = ladder or default_ladder(f.grid)
    p, q, alpha, r = params.p, params.q, params.alpha, params.r
    s = ladder.scales
    n = f.grid.dim
    is_int = float(alpha).is_integer()

    if form == "modulus":
        if is_int:
            raise ValueError("the modulus form needs non-integer alpha")
        k = int(math.floor(alpha))
        total = sobolev_norm(f, k, p)
        for axes, count in _ordered_tuple_groups(n, k):
            alpha_vec = [0] * n
            for a in axes:
                alpha_vec[a] += 1
            g_f = apply_symbol(f, _theta_symbol(f.grid, alpha_vec)) if k else f
            g = np.array([mixed_modulus(g_f, 1, sv, p, n_tau) for sv in s]) * s ** (k - alpha)
            total += count * ladder_integral(g, ladder, q, 1 - (alpha - k), alpha - k)
        return total

    if form == "zygmund":
        if not is_int:
            raise ValueError("the Zygmund form needs integer alpha")
        k = int(alpha)
        total = sobolev_norm(f, k - 1, p)
        for axes, count in _ordered_tuple_groups(n, k - 1):
            alpha_vec = [0] * n
            for a in axes:
                alpha_vec[a] += 1
            g_f = apply_symbol(f, _theta_symbol(f.grid, alpha_vec)) if k > 1 else f
            g = np.array([mixed_modulus(g_f, 2, sv, p, n_tau) for sv in s]) / s
            total += count * ladder_integral(g, ladder, q, 1.0, 1.0)
        return total

    if form == "mixed":
        if not alpha < r:
            raise ValueError("the mixed form needs alpha < r")
        g = np.array([mixed_modulus(f, r, sv, p, n_tau) for sv in s]) * s**-alpha
        return xp_norm(f, p) + ladder_integral(g, ladder, q, r - alpha, alpha)

    if form == "K":
        if not alpha < r:
            raise ValueError("the K form needs alpha < r")
        g = np.array([k_upper(f, r, sv, p) for sv in s]) * s**-alpha
        return xp_norm(f, p) + ladder_integral(g, ladder, q, r - alpha, alpha)

    # laplace
    if p != 2:
        raise ValueError("the Laplace-Mellin form is defined for p = 2 only")
    if not alpha < 2 * r:
        raise ValueError("the Laplace-Mellin form needs alpha < 2 r")
    g = np.array([modulus_L(f, r, sv**2, n_tau) for sv in s]) * s**-alpha
    semi = ladder_integral(g, ladder, q, 2 * r - alpha, alpha)
    if q != math.inf:
        semi *= 2.0 ** (1.0 / q)  # dtau/tau = 2 ds/s
    return xp_norm(f, 2) + semi

