import math

import numpy as np
import pytest
from scipy import integrate

from logmellin import (BESOV_FORMS, LogLatticeField, ScaleLadder, SmoothnessParams,
                       band_limited_random, besov_norm, default_ladder, hardy_steklov,
                       hardy_steklov_symbol, k_exact2, k_upper, ladder_integral, log_gaussian,
                       make_log_grid, mixed_modulus, modulus, modulus_L, plane_wave,
                       random_field, sobolev_norm, tau_grid, theta_apply, translate, xp_norm)


# frozen values for the unit log-Gaussian on the default 1-D grid
FROZEN_BESOV = {
    "modulus": 2.3292189916197414,
    "zygmund": 2.18858553109699,
    "mixed": 2.9674628731933788,
    "K": 2.314764832436753,
    "laplace": 4.322884812478717,
}


def test_tau_grid_nested():
    a, b = tau_grid(1.0), tau_grid(2.0)
    assert a[-1] == 1.0 and b[-1] == 2.0
    assert len(a) == 33
    assert set(np.round(a[a >= 2.0 ** -7], 14)) <= set(np.round(b, 14))
    assert tau_grid(0.0).tolist() == [0.0]


def test_tau_grid_floor():
    h = 1 / 64
    g = tau_grid(1.0, floor=h)
    assert g[0] == h and g[-1] == 1.0 and len(g) == 25
    assert tau_grid(h / 3, floor=h).tolist() == [h / 3]
    # nested under ratios 2^(k/4), down to the floor
    a, b = tau_grid(0.3, floor=h), tau_grid(0.3 * 2 ** 1.5, floor=h)
    assert set(np.round(a, 14)) <= set(np.round(b, 14))
    with pytest.raises(ValueError):
        tau_grid(1.0, floor=0.0)


def test_modulus_sup_below_floor_is_attained_at_floor(small1, rng):
    # every difference symbol increases on (0, h], so a fine sweep there adds nothing
    f = random_field(small1, rng)
    h = small1.step
    fine = max(xp_norm(translate(f, 1, t) - f) for t in np.linspace(1e-4, h, 200))
    assert fine <= xp_norm(translate(f, 1, h) - f) * (1 + 1e-12)
    assert modulus(f, 1, 1, h) == pytest.approx(xp_norm(translate(f, 1, h) - f), rel=1e-12)


def test_modulus_zero_scale_and_zero_field(small1, rng):
    f = random_field(small1, rng)
    assert modulus(f, 1, 2, 0.0) == 0
    assert mixed_modulus(f, 2, 0.0) == 0
    assert modulus_L(f, 2, 0.0) == 0
    z = LogLatticeField.zeros(small1)
    assert modulus(z, 1, 1, 0.5) == 0 and modulus_L(z, 1, 0.5) == 0


def test_modulus_plane_wave_closed_form(grid1):
    xi0 = 12 * grid1.freq_step
    f = plane_wave(grid1, xi0)
    s = 0.9 * math.pi / xi0
    assert modulus(f, 1, 1, s) == pytest.approx(2 * abs(math.sin(xi0 * s / 2)) * xp_norm(f),
                                                rel=1e-9)


def test_modulus_subadditive_scaling(small1, rng):
    f = random_field(small1, rng)
    for m in (1, 2):
        base = modulus(f, 1, m, 0.2)
        for a in (0.5, 2, 3):
            assert modulus(f, 1, m, a * 0.2) <= (1 + a) ** m * base * (1 + 1e-9)


def test_modulus_Lp_matches_direct_loop(small1, rng):
    f = random_field(small1, rng)
    s = 0.3
    direct = max(xp_norm(translate(f, 1, t) - f, 3) for t in tau_grid(s, floor=small1.step))
    assert modulus(f, 1, 1, s, p=3) == pytest.approx(direct, rel=1e-12)


def test_mixed_modulus_1d_dominates_and_2d_axis_wave(small1, small2, rng):
    f = random_field(small1, rng)
    for s in (0.1, 0.5):
        assert mixed_modulus(f, 1, s) == pytest.approx(modulus(f, 1, 1, s), rel=1e-12)
        assert mixed_modulus(f, 2, s) >= modulus(f, 1, 2, s) * (1 - 1e-12)
    pw = plane_wave(small2, [3 * small2.freq_step, 0.0])
    assert mixed_modulus(pw, 1, 0.2) == pytest.approx(modulus(pw, 1, 1, 0.2), rel=1e-12)
    assert modulus(pw, 2, 1, 0.2) < 1e-12


def test_mixed_modulus_monotone(small2, rng):
    f = random_field(small2, rng)
    vals = [mixed_modulus(f, 2, s) for s in 2.0 ** np.arange(-5, 3)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_modulus_L_plane_wave_and_bound(small2, rng):
    xi0 = np.array([2, 1]) * small2.freq_step
    f = plane_wave(small2, xi0)
    lam = xi0 @ xi0
    s = 0.8 * math.pi / lam
    assert modulus_L(f, 2, s) == pytest.approx(
        abs(np.exp(1j * s * lam) - 1) ** 2 * xp_norm(f), rel=1e-9)
    g = random_field(small2, rng)
    assert modulus_L(g, 3, 10.0) <= 8 * xp_norm(g) * (1 + 1e-12)


def test_first_inequality_derivative_bound(grid1, rng):
    f = band_limited_random(grid1, 6.0, rng)
    s = 0.2
    for m in range(1, 4):
        for k in range(0, m + 1):
            lhs = modulus(f, 1, m, s)
            rhs = s**k * (modulus(theta_apply(f, 1, k), 1, m - k, s) if m > k
                          else xp_norm(theta_apply(f, 1, k)))
            assert lhs <= rhs * (1 + 1e-9) + 1e-15


def test_translation_invariance(small2, rng):
    f = random_field(small2, rng)
    g = translate(f, 2, 0.123)
    assert mixed_modulus(g, 2, 0.4) == pytest.approx(mixed_modulus(f, 2, 0.4), rel=1e-10)
    assert k_exact2(g, 2, 0.3) == pytest.approx(k_exact2(f, 2, 0.3), rel=1e-10)


def test_hardy_steklov_preserves_constants(small2):
    f = LogLatticeField(small2, np.full(small2.shape, 3.0))
    np.testing.assert_allclose(hardy_steklov(f, 3, 0.7).values, 3.0, atol=1e-12)


@pytest.mark.parametrize("r", [1, 2])
def test_hardy_steklov_symbol_against_quadrature(small1, r):
    s = 0.5
    xi = small1.freq_axis()[3]

    def avg(k):
        part = lambda *taus: np.exp(1j * k * xi * sum(taus))
        lo = [0.0] * r
        hi = [s / r] * r
        re = integrate.nquad(lambda *t: part(*t).real, list(zip(lo, hi)))[0]
        im = integrate.nquad(lambda *t: part(*t).imag, list(zip(lo, hi)))[0]
        return (re + 1j * im) / (s / r) ** r

    oracle = sum((-1) ** (k + 1) * math.comb(r, k) * avg(k) for k in range(1, r + 1))
    assert hardy_steklov_symbol(small1, r, s)[3] == pytest.approx(oracle, rel=1e-10)


def test_hardy_steklov_converges_to_identity(grid1):
    f = log_gaussian(grid1)
    e = [xp_norm(hardy_steklov(f, 2, s) - f) for s in (1e-2, 1e-3)]
    assert math.log10(e[0] / e[1]) >= 0.9


def test_hardy_steklov_smoothing_bound(small1, rng):
    f = random_field(small1, rng)
    for s in (0.25, 1.0):
        g = hardy_steklov(f, 2, s)
        for k in (1, 2):
            # |xi|^k |symbol| <= 36 / s^k for r = 2, k <= 2
            assert xp_norm(theta_apply(g, 1, k)) <= 64 / s**k * xp_norm(f)


def test_sobolev_norm_examples(small1, rng):
    c = LogLatticeField(small1, np.full(small1.shape, 2.0))
    assert sobolev_norm(c, 2) == pytest.approx(xp_norm(c), rel=1e-12)
    xi0 = 5 * small1.freq_step
    pw = plane_wave(small1, xi0)
    assert sobolev_norm(pw, 1) == pytest.approx((1 + xi0) * xp_norm(pw), rel=1e-12)
    f = random_field(small1, rng)
    assert sobolev_norm(f, 0) == xp_norm(f)


def test_sobolev_variants_equivalent(small2, rng):
    for _ in range(5):
        f = band_limited_random(small2, 8.0, rng)
        ratio = sobolev_norm(f, 2, variant="tuple") / sobolev_norm(f, 2)
        assert 1.0 <= ratio <= 6.0


def test_k_exact2_single_frequency(small1):
    xi0 = 4 * small1.freq_step
    f = plane_wave(small1, xi0)
    t, r = 0.3, 2
    w = 1 + xi0**r
    tw = t**r * w
    assert k_exact2(f, r, t) == pytest.approx(xp_norm(f) * tw / math.sqrt(1 + tw**2), rel=1e-12)
    assert k_exact2(f, r, 0.0) == 0


def test_k_upper_bracket(grid1, rng):
    for _ in range(4):
        f = band_limited_random(grid1, 30.0, rng)
        for t in (0.01, 0.1, 1.0, 10.0):
            ku, k2 = k_upper(f, 2, t), k_exact2(f, 2, t)
            assert k2 <= ku * (1 + 1e-12)
            assert ku <= 10 * k2


def test_k_upper_limits(small1, rng):
    f = band_limited_random(small1, 5.0, rng)
    assert k_upper(f, 2, 1e4) == pytest.approx(xp_norm(f), rel=1e-12)
    t = 1e-3
    assert k_upper(f, 2, t) <= t**2 * sobolev_norm(f, 2) * (1 + 1e-12)
    assert k_upper(LogLatticeField.zeros(small1), 1, 0.5) == 0


def test_ladder_integral_power_law():
    lad = ScaleLadder(-20, 20)
    s = lad.scales
    g = np.minimum(s, 1 / s)
    # int_0^inf min(s, 1/s)^2 ds/s = 1
    assert ladder_integral(g, lad, 2.0, 1.0, 1.0) == pytest.approx(1.0, rel=0.1)
    assert ladder_integral(g, lad, math.inf, 1, 1) == pytest.approx(1.0)


def test_default_ladder(grid1, grid2):
    assert default_ladder(grid1) == ScaleLadder(-6, 4)
    assert default_ladder(grid2) == ScaleLadder(-4, 3)


@pytest.mark.parametrize("form", BESOV_FORMS)
def test_besov_frozen_values(grid1, form):
    alpha = 1.0 if form == "zygmund" else 0.5
    f = log_gaussian(grid1)
    val = besov_norm(f / xp_norm(f), SmoothnessParams(alpha=alpha), form=form)
    assert val == pytest.approx(FROZEN_BESOV[form], rel=1e-9)


@pytest.mark.parametrize("form", BESOV_FORMS)
def test_besov_zero_and_homogeneous(small1, rng, form):
    params = SmoothnessParams(alpha=1.0 if form == "zygmund" else 0.5)
    assert besov_norm(LogLatticeField.zeros(small1), params, form=form) == 0
    f = band_limited_random(small1, 10.0, rng)
    a = besov_norm(f, params, form=form)
    assert besov_norm(f * 2.5, params, form=form) == pytest.approx(2.5 * a, rel=1e-9)


def test_besov_form_preconditions(small1, rng):
    f = random_field(small1, rng)
    with pytest.raises(ValueError):
        besov_norm(f, SmoothnessParams(alpha=1.0), form="modulus")
    with pytest.raises(ValueError):
        besov_norm(f, SmoothnessParams(alpha=0.5), form="zygmund")
    with pytest.raises(ValueError):
        besov_norm(f, SmoothnessParams(alpha=2.5, r=2), form="mixed")
    with pytest.raises(ValueError):
        besov_norm(f, SmoothnessParams(alpha=0.5), form="nope")


def test_besov_plane_wave_direct_summation(grid1):
    xi0 = 20 * grid1.freq_step
    f = plane_wave(grid1, xi0)
    f = f / xp_norm(f)
    lad = default_ladder(grid1)
    alpha, r = 0.5, 2
    s = lad.scales
    # sup over (0, s] of |2 sin(xi0 tau / 2)|^r, saturating at 2^r past the first crest
    om = np.array([max(2 * abs(math.sin(xi0 * t / 2)) for t in tau_grid(sv, floor=grid1.step)) ** r for sv in s])
    direct = 1 + ladder_integral(om * s**-alpha, lad, 2, r - alpha, alpha)
    assert besov_norm(f, SmoothnessParams(alpha=alpha, r=r), form="mixed") == pytest.approx(
        direct, rel=1e-9)


def test_smoothness_params_validation():
    with pytest.raises(ValueError):
        SmoothnessParams(alpha=-1)
    with pytest.raises(ValueError):
        SmoothnessParams(p=0.5)
