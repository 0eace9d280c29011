import math

import numpy as np
import pytest

from logmellin import (LogLatticeField, MellinSpectrum, Multiplier, apply_multiplier, evolve,
                       inverse_mellin, laplace_mellin_apply, log_gaussian, make_log_grid,
                       mellin_transform, plane_wave, pw_project, random_field, BandSpec,
                       theta_apply, translate, xp_norm, band_limited_random, inner_product)


def rel(a, b):
    return xp_norm(a - b) / xp_norm(b)


def test_plane_wave_has_single_coefficient(small1):
    xi0 = 5 * small1.freq_step
    c = mellin_transform(plane_wave(small1, xi0)).coeffs
    nz = np.flatnonzero(np.abs(c) > 1e-9 * np.abs(c).max())
    assert nz.tolist() == [5]


def test_constant_has_mass_at_zero_only(small2):
    c = mellin_transform(LogLatticeField(small2, np.ones(small2.shape))).coeffs
    assert abs(c[0, 0]) > 0
    c = c.copy()
    c[0, 0] = 0
    assert np.abs(c).max() < 1e-12


def test_log_gaussian_spectrum_closed_form():
    g = make_log_grid(1, -16, 1 / 16, 512)
    spec = mellin_transform(log_gaussian(g))
    xi = g.freq_axis()
    inner = np.abs(xi) < 6
    np.testing.assert_allclose(spec.coeffs[inner].real, np.exp(-xi[inner] ** 2 / 2), atol=1e-12)
    assert np.abs(spec.coeffs[inner].imag).max() < 1e-12


def test_mellin_values_match_direct_quadrature():
    g = make_log_grid(1, -12, 1 / 32, 768)
    f = log_gaussian(g, 0.7, center=0.3)
    spec = mellin_transform(f)
    xi = g.freq_axis()[4]
    direct = np.sum(f.values * np.exp(-1j * xi * g.u_axis())) * g.step
    assert spec.mellin_values()[4] == pytest.approx(direct, rel=1e-12)


def test_round_trip_and_parseval(grid2, rng):
    f = random_field(grid2, rng)
    spec = mellin_transform(f)
    assert spec.norm() == pytest.approx(xp_norm(f), rel=1e-12)
    assert rel(inverse_mellin(spec), f) < 1e-12


def test_single_bin_spectrum_gives_plane_wave(small1):
    c = np.zeros(small1.shape, complex)
    c[3] = 1
    f = inverse_mellin(MellinSpectrum(small1, c))
    pw = plane_wave(small1, 3 * small1.freq_step)
    ratio = f.values / pw.values
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)


def test_zero_spectrum(small1):
    f = inverse_mellin(MellinSpectrum(small1, np.zeros(small1.shape)))
    assert xp_norm(f) == 0


def test_translate_identity_and_lattice_shift(small2, rng):
    f = random_field(small2, rng)
    np.testing.assert_array_equal(translate(f, 2, 0.0).values, f.values)
    np.testing.assert_array_equal(translate(f, 1, small2.step).values,
                                  np.roll(f.values, -1, axis=0))


def test_translate_plane_wave_phase(small1):
    xi0 = 7 * small1.freq_step
    f = plane_wave(small1, xi0)
    t = 0.0371
    assert rel(translate(f, 1, t), f * np.exp(1j * xi0 * t)) < 1e-12


def test_translate_group_and_isometry(grid1, rng):
    f = random_field(grid1, rng)
    s, t = 0.123, -0.0457
    lhs = translate(translate(f, 1, t), 1, s)
    assert rel(lhs, translate(f, 1, t + s)) < 1e-12
    assert xp_norm(translate(f, 1, t)) == pytest.approx(xp_norm(f), rel=1e-12)


def test_theta_plane_wave_eigen(small2):
    xi0 = np.array([3, -2]) * small2.freq_step
    f = plane_wave(small2, xi0)
    for k in range(4):
        assert rel(theta_apply(f, 2, k), f * (1j * xi0[1]) ** k) < 1e-11


def test_theta_kills_constants(small1):
    f = LogLatticeField(small1, np.full(small1.shape, 2.5))
    assert xp_norm(theta_apply(f, 1, 2)) < 1e-12


def test_theta_matches_centered_difference():
    g = make_log_grid(1, -10, 1 / 32, 640)
    f = log_gaussian(g)
    exact = theta_apply(f, 1, 1)
    errs = []
    for d in (1e-2, 5e-3):
        fd = (translate(f, 1, d) - translate(f, 1, -d)) / (2 * d)
        errs.append(rel(fd, exact))
    order = math.log(errs[0] / errs[1]) / math.log(2)
    assert order == pytest.approx(2.0, abs=0.05)


def test_theta_commutes_with_translation(small2, rng):
    f = random_field(small2, rng)
    for i in (1, 2):
        for j in (1, 2):
            a = translate(theta_apply(f, i, 1), j, 0.37)
            b = theta_apply(translate(f, j, 0.37), i, 1)
            assert rel(a, b) < 1e-11


def test_laplace_identities(small2, rng):
    f = random_field(small2, rng)
    assert rel(laplace_mellin_apply(f, 0.0), f) < 1e-14
    half = laplace_mellin_apply(laplace_mellin_apply(f, 0.5), 0.5)
    assert rel(half, laplace_mellin_apply(f, 1.0)) < 1e-10
    lhs = xp_norm(laplace_mellin_apply(f, 0.5)) ** 2
    rhs = sum(xp_norm(theta_apply(f, j, 1)) ** 2 for j in (1, 2))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_laplace_matches_minus_theta_squared(small1, rng):
    f = random_field(small1, rng)
    assert rel(laplace_mellin_apply(f, 1), -theta_apply(f, 1, 2)) < 1e-12


def test_laplace_plane_wave(small2):
    xi0 = np.array([2, 5]) * small2.freq_step
    f = plane_wave(small2, xi0)
    assert rel(laplace_mellin_apply(f, 0.75), f * (xi0 @ xi0) ** 0.75) < 1e-11


def test_multiplier_consistency(small2, rng):
    f = random_field(small2, rng)
    assert rel(apply_multiplier(f, lambda lam: np.ones_like(lam)), f) < 1e-14
    assert rel(apply_multiplier(f, lambda lam: lam), laplace_mellin_apply(f, 1)) < 1e-12
    sigma = 9.0
    ind = apply_multiplier(f, lambda lam: (lam <= sigma**2).astype(float))
    assert rel(ind, pw_project(f, BandSpec("ball", sigma))) < 1e-12


def test_multiplier_self_adjoint(small1, rng):
    f, h = random_field(small1, rng), random_field(small1, rng)
    F = Multiplier(lambda lam: np.exp(-lam / 50))
    a = inner_product(apply_multiplier(f, F), h)
    b = inner_product(f, apply_multiplier(h, F))
    assert a == pytest.approx(b, rel=1e-10)


def test_multiplier_from_table(small1, rng, tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("lambda,value\n0,1\n100,0\n1e6,0\n")
    F = Multiplier.load(path)
    assert F(np.array([50.0]))[0] == pytest.approx(0.5)


def test_multiplier_per_axis(small2):
    xi0 = np.array([3, 4]) * small2.freq_step
    f = plane_wave(small2, xi0)
    out = apply_multiplier(f, lambda lam: lam**2, mode="axis", j=2)
    assert rel(out, f * xi0[1] ** 2) < 1e-12


def test_multiplier_rejects_nonfinite(small1, rng):
    with pytest.raises(ValueError), np.errstate(divide="ignore"):
        apply_multiplier(random_field(small1, rng), lambda lam: 1 / lam)


def test_evolve(small2, rng):
    f = random_field(small2, rng)
    assert rel(evolve(f, 0.0), f) < 1e-14
    assert xp_norm(evolve(f, 0.3)) == pytest.approx(xp_norm(f), rel=1e-12)
    assert rel(evolve(evolve(f, 0.3), -0.11), evolve(f, 0.19)) < 1e-10
    xi0 = np.array([1, 2]) * small2.freq_step
    pw = plane_wave(small2, xi0)
    assert rel(evolve(pw, 0.2), pw * np.exp(0.2j * (xi0 @ xi0))) < 1e-12


def test_generator_difference_quotient_first_order(grid1, rng):
    f = band_limited_random(grid1, 20.0, rng)
    exact = theta_apply(f, 1, 1)
    e = [rel((translate(f, 1, d) - f) / d, exact) for d in (1e-2, 1e-3)]
    assert math.log10(e[0] / e[1]) >= 0.9
