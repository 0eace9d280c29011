import math

import numpy as np
import pytest
from scipy import integrate

from logmellin import (BandSpec, LogLatticeField, approx_space_norm, axis_best_approx,
                       band_limited_random, best_approx, besov_norm, SmoothnessParams,
                       direct_inverse_report, jackson_apply, jackson_kernel, jackson_symbol,
                       modulus, plane_wave, power_law_field, random_field, sigma_ladder,
                       two_frequency, xp_norm)

# c(1) for the order-one kernel (N = 8), frozen from a high-accuracy run
C1 = 4.7869623149393705


def _quad_full_line(func, N, periods=400, **kw):
    edges = N * np.pi * np.arange(periods + 1)
    return 2 * sum(integrate.quad(func, a, b, epsabs=1e-15, epsrel=1e-12, limit=200, **kw)[0]
                   for a, b in zip(edges[:-1], edges[1:]))


def test_kernel_parameters():
    k1 = jackson_kernel(1)
    assert k1.N == 8 and k1.b == (1.0,)
    assert jackson_kernel(3).b == (3.0, -3.0, 1.0)
    with pytest.raises(ValueError):
        jackson_kernel(0)


@pytest.mark.parametrize("m", [1, 2])
def test_kernel_unit_mass_by_quadrature(m):
    ker = jackson_kernel(m)
    assert _quad_full_line(ker.rho, ker.N) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("omega", [0.0, 0.2, 0.55, 0.9])
def test_kernel_transform_by_quadrature(omega):
    ker = jackson_kernel(1)
    val = _quad_full_line(ker.rho, ker.N, weight="cos", wvar=omega)
    assert ker.transform(np.array([omega]))[0] == pytest.approx(val, abs=1e-9)


def test_kernel_transform_support():
    ker = jackson_kernel(2)
    w = np.array([1.0, 1.3, -1.0, -5.0])
    assert np.all(ker.transform(w) == 0)
    assert ker.transform(np.array([0.0]))[0] == pytest.approx(1.0, rel=1e-12)


def test_c1_against_independent_quadrature():
    ker = jackson_kernel(1)
    assert ker.c == pytest.approx(C1, rel=1e-10)
    # the integrand decays like t^-7, so 400 periods leave a tail below 1e-12
    val = _quad_full_line(lambda t: ker.rho(t) * (1 + t), ker.N)
    assert ker.c == pytest.approx(val, rel=1e-9)


def test_jackson_plane_wave_eigen(grid1):
    sigma, m = 20.0, 2
    xi0 = 9 * grid1.freq_step
    f = plane_wave(grid1, xi0)
    ker = jackson_kernel(m)
    lam = sum(bk * ker.transform(np.array([k * xi0 / sigma]))[0]
              for k, bk in enumerate(ker.b, start=1))
    assert xp_norm(jackson_apply(f, 1, sigma, m) - f * lam) < 1e-12 * xp_norm(f)


def test_jackson_band_limit_exactness(grid2, rng):
    f = random_field(grid2, rng)
    sigma = 10.0
    g = jackson_apply(f, 2, sigma, 2)
    F = np.fft.fftn(g.values)
    outside = np.abs(grid2.frequencies()[1]) > sigma
    leak = np.sqrt(np.sum(np.abs(np.broadcast_to(outside, F.shape) * F) ** 2))
    assert leak <= 1e-8 * np.sqrt(np.sum(np.abs(F) ** 2))


def test_jackson_near_identity_on_low_band(grid1, rng):
    sigma, m = 40.0, 1
    f = band_limited_random(grid1, sigma / 8, rng)
    err = xp_norm(jackson_apply(f, 1, sigma, m) - f)
    sym = jackson_symbol(grid1, 1, sigma, m)
    flat = np.abs(1 - sym[np.abs(grid1.freq_axis()) <= sigma / 8]).max()
    assert err <= flat * xp_norm(f) * (1 + 1e-9)


def test_jackson_error_bound_m1(grid1, rng):
    for _ in range(5):
        f = random_field(grid1, rng)
        for sigma in (2.0, 16.0, 100.0):
            err = xp_norm(f - jackson_apply(f, 1, sigma, 1))
            assert err <= C1 * modulus(f, 1, 1, 1 / sigma)


def test_best_approx_examples(grid1):
    s = grid1.freq_step
    pw = plane_wave(grid1, 3 * s)
    assert best_approx(pw, BandSpec("ball", 5 * s)) < 1e-12
    f = two_frequency(grid1, 3 * s, 30 * s, 1.0, 0.25)
    expected = 0.25 * xp_norm(plane_wave(grid1, 30 * s))
    assert best_approx(f, BandSpec("ball", 10 * s)) == pytest.approx(expected, rel=1e-12)


def test_best_approx_monotone_and_vanishing(grid2, rng):
    f = random_field(grid2, rng)
    vals = [best_approx(f, BandSpec("ball", s)) for s in sigma_ladder(grid2)]
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-12 * xp_norm(f)


def test_best_approx_lp_upper_bound(small1, rng):
    f = random_field(small1, rng)
    band = BandSpec("box", 8.0)
    assert best_approx(f, band, p=4) > 0
    # Jackson error is never below the exact X^2 distance
    assert best_approx(f, band, p=2, m=2) <= xp_norm(f - jackson_apply(f, 1, 8.0, 2))


def test_axis_best_approx_equals_ball_in_1d(small1, rng):
    f = random_field(small1, rng)
    assert axis_best_approx(f, 1, 7.0) == pytest.approx(best_approx(f, BandSpec("box", 7.0)))


def test_approx_space_norm(grid1, rng):
    f = band_limited_random(grid1, 5.0, rng)
    val = approx_space_norm(f, 0.5)
    sig = sigma_ladder(grid1)
    direct = sum((s**0.5 * best_approx(f, BandSpec("ball", s))) ** 2 for s in sig if s < 5.0)
    assert val == pytest.approx(1 + math.sqrt(direct), rel=1e-12)
    assert approx_space_norm(LogLatticeField.zeros(grid1), 0.5) == 0
    with pytest.raises(ValueError):
        approx_space_norm(f, 0.0)


def test_approx_norm_vs_besov_power_law(grid1, rng):
    ratios = []
    for alpha in (0.5, 1.5):
        f = power_law_field(grid1, 2 * alpha + 2, rng)
        b = besov_norm(f, SmoothnessParams(alpha=alpha, r=2), form="mixed")
        ratios.append(approx_space_norm(f, alpha) / b)
    assert max(ratios) / min(ratios) < 10


def test_direct_inverse_plane_wave_suite(grid1):
    s = grid1.freq_step
    suite = {f"pw{k}": plane_wave(grid1, k * s) for k in (3, 17, 60)}
    rep = direct_inverse_report(suite)
    assert rep.passed
    tags = {c.tag for c in rep.checks}
    assert {"ap-mod", "100", "200", "LimitingJackson", "d-d"} <= tags
    c = rep.values["constants"]
    assert c["ap-mod"] <= jackson_kernel(1).c


def test_direct_inverse_rejects_zero_and_empty(small1):
    with pytest.raises(ValueError):
        direct_inverse_report([])
    with pytest.raises(ValueError):
        direct_inverse_report([LogLatticeField.zeros(small1)])
