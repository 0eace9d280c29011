"""Jackson-type approximation by Bernstein-Mellin fields.

The kernel ``rho(t) = a (sin(t/N)/t)^N`` with ``N = 2(m+3)`` is an even,
nonnegative, unit-mass entire function of exponential type one.  Its
Fourier transform is, up to a constant, the ``N``-fold convolution of the
indicator of ``[-1/N, 1/N]``: a cardinal B-spline of degree ``N-1``
supported on ``[-1, 1]``.  We evaluate that spline directly, so the
Jackson multiplier is exactly band-limited.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.interpolate import BSpline

from .bernstein import BandSpec, pw_project
from .grid import LogGrid, LogLatticeField, parse_exponent, xp_norm
from .report import SmoothnessReport
from .smoothness import (ScaleLadder, default_ladder, ladder_integral, mixed_modulus,
                         modulus, sobolev_norm)
from .spectral import apply_symbol, energy_density, theta_apply

__all__ = [
    "JacksonKernel",
    "jackson_kernel",
    "jackson_symbol",
    "jackson_apply",
    "best_approx",
    "axis_best_approx",
    "approx_space_norm",
    "sigma_ladder",
    "direct_inverse_report",
]


def _sinc_power_integral(n: int) -> Fraction:
    """``int (sin x / x)^n dx / pi`` over the real line, exactly.

    ``pi / (2^(n-1) (n-1)!) * sum_{k <= n/2} (-1)^k C(n,k) (n-2k)^(n-1)``.
    """
    total = sum((-1) ** k * math.comb(n, k) * (n - 2 * k) ** (n - 1) for k in range(n // 2 + 1))
    return Fraction(total, 2 ** (n - 1) * math.factorial(n - 1))


@dataclass(frozen=True)
class JacksonKernel:
    """Normalized Jackson kernel of order ``m``."""

    m: int
    N: int
    a: float
    b: tuple[float, ...]
    _spline: BSpline = field(repr=False, compare=False)

    def rho(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.a * (np.sinc(t / (self.N * np.pi)) / self.N) ** self.N

    def transform(self, omega) -> np.ndarray:
        """``int rho(t) exp(-i omega t) dt``; zero for ``|omega| >= 1``."""
        omega = np.asarray(omega, dtype=float)
        w = 2.0 / self.N
        x = (omega + 1.0) / w
        inside = (x > 0) & (x < self.N)
        out = np.zeros(omega.shape)
        if np.any(inside):
            out[inside] = self._spline(x[inside])
        return self.a * 2 * np.pi * 0.5**self.N * w ** (self.N - 1) * out

    def moment(self, k: int, m: int | None = None) -> float:
        """``int rho(t) |t|^k (1 + |t|)^(m-k) dt`` by adaptive quadrature."""
        m = self.m if m is None else m
        return _kernel_moment(self.m, k, m)

    @property
    def c(self) -> float:
        """Jackson constant ``c(m) = int rho(t) (1 + |t|)^m dt``."""
        return self.moment(0, self.m)


@lru_cache(maxsize=None)
def jackson_kernel(m: int) -> JacksonKernel:
    """Build the order-``m`` kernel, normalized to unit mass."""
    if int(m) != m or m < 1:
        raise ValueError("kernel order m must be a positive integer")
    m = int(m)
    N = 2 * (m + 3)
    # int (sin(t/N)/t)^N dt = N^(1-N) int (sin u / u)^N du
    mass = float(_sinc_power_integral(N)) * math.pi * float(N) ** (1 - N)
    b = tuple(float((-1) ** (k + 1) * math.comb(m, k)) for k in range(1, m + 1))
    spline = BSpline.basis_element(np.arange(N + 1, dtype=float), extrapolate=False)
    return JacksonKernel(m=m, N=N, a=1.0 / mass, b=b, _spline=spline)


@lru_cache(maxsize=None)
def _kernel_moment(order: int, k: int, m: int) -> float:
    ker = jackson_kernel(order)
    N = ker.N

    def integrand(t):
        return ker.rho(t) * t**k * (1 + t) ** (m - k)

    # split at the zeros N*pi*j of sin(t/N)
    edges = N * np.pi * np.arange(0, 41)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(integrand, lo, hi, epsabs=0, epsrel=1e-13, limit=200)[0]
    # beyond T the integrand is a * sin(t/N)^N t^(m-N) (1 + 1/t)^(m-k); replace
    # sin^N by its mean C(N, N/2) / 2^N and integrate the power law
    T = edges[-1]
    mean_sin = math.comb(N, N // 2) / 2.0**N
    total += ker.a * mean_sin * (1 + 1 / T) ** (m - k) * T ** (m - N + 1) / (N - m - 1)
    return 2.0 * total


def jackson_symbol(grid: LogGrid, j: int, sigma: float, m: int) -> np.ndarray:
    """Multiplier ``sum_k b_k rho_hat(k xi_j / sigma)`` of ``Q_j(sigma, m)``."""
    ax = grid.check_axis(j)
    ker = jackson_kernel(m)
    xi = grid.frequencies()[ax]
    sym = np.zeros(xi.shape)
    for k, bk in enumerate(ker.b, start=1):
        sym = sym + bk * ker.transform(k * xi / sigma)
    return sym


def jackson_apply(f: LogLatticeField, j: int, sigma: float, m: int) -> LogLatticeField:
    """Jackson operator ``Q_j(sigma, m) f = int Phi(t) U_j(t) f dt``; type ``sigma`` on axis ``j``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return apply_symbol(f, jackson_symbol(f.grid, j, sigma, m))


def _jackson_product(f: LogLatticeField, sigma: float, m: int) -> LogLatticeField:
    sym = np.ones(f.grid.shape)
    for j in range(1, f.grid.dim + 1):
        sym = sym * jackson_symbol(f.grid, j, sigma, m)
    return apply_symbol(f, sym)


def best_approx(f: LogLatticeField, band: BandSpec, p=2, m: int = 2) -> float:
    """Best-approximation error by fields with spectrum in ``band``.

    Exact (spectral tail norm) for ``p = 2``.  For other ``p`` the error of
    the Jackson product ``Q_1 ... Q_n f`` of order ``m`` is returned: an upper
    bound, exact infima being out of reach.  A ball band of radius ``sigma``
    is approximated from inside by the box of half-width ``sigma/sqrt(n)``.
    """
    p = parse_exponent(p)
    if p == 2:
        return xp_norm(f - pw_project(f, band), 2)
    if band.annulus is not None:
        raise ValueError("annulus bands have no best approximation")
    sig = band.sigma if band.shape == "box" else band.sigma / math.sqrt(f.grid.dim)
    return xp_norm(f - _jackson_product(f, sig, m), p)


def axis_best_approx(f: LogLatticeField, j: int, sigma: float) -> float:
    """``E_{j,2}(sigma, f)``: distance to fields band-limited on axis ``j`` only."""
    ax = f.grid.check_axis(j)
    E = energy_density(f)
    mask = np.abs(f.grid.frequencies()[ax]) > sigma * (1 + 1e-12)
    return math.sqrt(float(np.sum(np.broadcast_to(mask, E.shape) * E)))


def sigma_ladder(grid: LogGrid) -> np.ndarray:
    """Dyadic band limits ``2^j`` from 1 up to the largest lattice frequency."""
    top = math.ceil(math.log2(grid.spectral_radius))
    return 2.0 ** np.arange(0, top + 1)


def approx_space_norm(f: LogLatticeField, alpha: float, q=2, ladder: ScaleLadder | None = None,
                      shape: str = "ball") -> float:
    """``||f|| + (sum_j (2^(j alpha) E_2(2^j, f))^q)^(1/q)`` over dyadic ``sigma = 2^j``.

    Without a ladder ``j`` runs from 0 until the band covers the lattice.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    q = parse_exponent(q)
    if ladder is None:
        sigmas = sigma_ladder(f.grid)
    else:
        sigmas = ladder.scales
    errs = np.array([best_approx(f, BandSpec(shape, s), 2) for s in sigmas])
    terms = sigmas**alpha * errs
    semi = float(terms.max()) if q == math.inf else float(np.sum(terms**q)) ** (1 / q)
    return xp_norm(f, 2) + semi


def direct_inverse_report(suite, alpha: float = 0.5, p=2, q=2, r: int = 2, m: int = 1,
                          sigmas=None, ladder: ScaleLadder | None = None,
                          slack: float = 1.1) -> SmoothnessReport:
    """Measure the constants of the Jackson, direct and inverse inequalities on a suite.

    Per field and band limit ``sigma`` the ratios

    * ``ap-mod``: ``E_p(sigma, f) / Omega^m_p(1/sigma, f)`` (box band),
    * ``100``: ``E_{j,p}(sigma, f) / omega^m_{j,p}(1/sigma, f)``,
    * ``200``: ``sigma^k E_{j,p}(sigma, f) / omega^(m-k)_{j,p}(1/sigma, Theta_j^k f)``,
    * ``LimitingJackson``: ``sigma^m E_p(sigma, f) / ||f||_{W^m_p}``

    are maximized over the suite; ``d-d`` and ``inverse`` compare the
    approximation-space seminorm with the ``mixed`` Besov seminorm in both
    directions.  Checks pass when each constant stays below the kernel
    moment bound times ``slack``.  Pairs whose right side is below
    ``1e-12 ||f||`` are skipped.
    """
    suite = list(suite.items()) if isinstance(suite, dict) else list(enumerate(suite))
    if not suite:
        raise ValueError("suite must contain at least one field")
    p = parse_exponent(p)
    q = parse_exponent(q)
    grid = suite[0][1].grid
    n = grid.dim
    ker = jackson_kernel(m)
    sigmas = sigma_ladder(grid) if sigmas is None else np.asarray(sigmas, dtype=float)
    ladder = ladder or default_ladder(grid)
    rep = SmoothnessReport("direct-inverse", params={
        "alpha": alpha, "p": p, "q": q, "r": r, "m": m, "n": n,
        "sigmas": list(sigmas), "band": "box", "upper_bound": p != 2})
    consts = {"ap-mod": 0.0, "100": 0.0, "LimitingJackson": 0.0}
    consts.update({f"200[k={k}]": 0.0 for k in range(1, m + 1)})
    per_field = {}
    semis = {}
    for name, f in suite:
        nf = xp_norm(f, p)
        if nf == 0:
            raise ValueError(f"zero field {name!r} cannot enter a suite")
        guard = 1e-12 * nf
        worst = {}
        for sig in sigmas:
            e = best_approx(f, BandSpec("box", sig), p, m)
            om = mixed_modulus(f, m, 1 / sig, p)
            if om > guard:
                worst["ap-mod"] = max(worst.get("ap-mod", 0.0), e / om)
            for j in range(1, n + 1):
                if p == 2:
                    ej = axis_best_approx(f, j, sig)
                else:
                    ej = xp_norm(f - jackson_apply(f, j, sig, m), p)
                wj = modulus(f, j, m, 1 / sig, p)
                if wj > guard:
                    worst["100"] = max(worst.get("100", 0.0), ej / wj)
                for k in range(1, m + 1):
                    dk = theta_apply(f, j, k)
                    rhs = (modulus(dk, j, m - k, 1 / sig, p) if k < m else xp_norm(dk, p)) / sig**k
                    if rhs > guard:
                        key = f"200[k={k}]"
                        worst[key] = max(worst.get(key, 0.0), ej / rhs)
            wm = sobolev_norm(f, m, p) / sig**m
            if wm > guard:
                worst["LimitingJackson"] = max(worst.get("LimitingJackson", 0.0), e / wm)
        for key, v in worst.items():
            consts[key] = max(consts[key], v)
        per_field[str(name)] = worst

        s = ladder.scales
        g_mod = np.array([mixed_modulus(f, r, sv, p) for sv in s]) * s**-alpha
        besov_semi = ladder_integral(g_mod, ladder, q, r - alpha, alpha)
        approx_semi = approx_space_norm(f, alpha, q, shape="box") - nf if p == 2 else None
        semis[str(name)] = {"besov": besov_semi, "approx": approx_semi}

    bounds = {"ap-mod": n * ker.c, "100": ker.c,
              "LimitingJackson": n * ker.moment(m, m)}
    bounds.update({f"200[k={k}]": ker.moment(k, m) for k in range(1, m + 1)})
    for key, c in consts.items():
        tag = key.split("[")[0]
        rep.add(tag, f"suite constant {key}", c, bounds[key] * slack, bound=bounds[key])
    rep.values["constants"] = consts
    rep.values["kernel_bounds"] = bounds
    rep.values["per_field"] = per_field
    if p == 2:
        dd = max(v["approx"] / v["besov"] for v in semis.values() if v["besov"] > 0)
        inv = max(v["besov"] / v["approx"] for v in semis.values() if v["approx"] > 0)
        rep.values["semis"] = semis
        rep.values["d-d"] = dd
        rep.values["inverse"] = inv
        rep.add("d-d", "approximation seminorm / Besov seminorm", dd, math.inf)
        rep.add("d-d", "Besov seminorm / approximation seminorm", inv, math.inf,
                direction="inverse")
    return rep
