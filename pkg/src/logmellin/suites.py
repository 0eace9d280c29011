"""Verification suites: every inequality of the theory checked on seeded fields.

Each suite returns a :class:`SmoothnessReport` whose checks carry the tag of
the inequality they exercise.  Suites are pure functions of a
:class:`SuiteConfig`, so a fixed seed reproduces the report byte for byte.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .approx import approx_space_norm, direct_inverse_report
from .bernstein import (BandSpec, band_mask, bernstein_check, favard, favard_partial_sum,
                        kolmogorov_stein_check, pw_project, riesz_boas, type_estimate)
from .fields import band_limited_random, plane_wave, random_field, reference_family
from .frames import (besov_from_bands, besov_from_coeffs, build_frames, build_partition,
                     frame_analyze, frame_reconstruct, lp_analyze, lp_synthesize)
from .grid import LogGrid, inner_product, make_log_grid, xp_norm
from .report import Check, SmoothnessReport
from .smoothness import (ScaleLadder, SmoothnessParams, besov_norm, default_ladder, k_exact2,
                         k_upper, mixed_modulus, modulus)
from .spectral import inverse_mellin, laplace_mellin_apply, mellin_transform, theta_apply, translate

__all__ = [
    "SuiteConfig",
    "SUITES",
    "run_suite",
    "core_suite",
    "smoothness_suite",
    "bernstein_suite",
    "approx_suite",
    "frames_suite",
    "equivalence_table",
    "equivalence_checks",
    "merge_reports",
]

SUITES = ("core", "smoothness", "bernstein", "approx", "frames")


@dataclass(frozen=True)
class SuiteConfig:
    """Everything a suite run depends on."""

    dim: int = 1
    u_min: float | None = None
    step: float | None = None
    count: int | None = None
    seed: int = 0
    n_fields: int = 8
    nu_min: int | None = None
    nu_max: int | None = None
    alpha: float = 0.5
    q: float = 2.0
    r: int = 2
    m: int = 1
    oversampling: float = 2.0
    sharpness: float = 1.0
    rtol: float = 1e-9
    equivalence_spread: float = 50.0
    equivalence_stability: float = 2.0

    @property
    def grid(self) -> LogGrid:
        M = self.count or (1024 if self.dim == 1 else 128)
        h = self.step or (1 / 64 if self.dim == 1 else 1 / 16)
        u0 = self.u_min if self.u_min is not None else -M * h / 2
        return make_log_grid(self.dim, u0, h, M)

    @property
    def ladder(self) -> ScaleLadder:
        base = default_ladder(self.grid)
        lo = self.nu_min if self.nu_min is not None else base.nu_min
        hi = self.nu_max if self.nu_max is not None else base.nu_max
        return ScaleLadder(lo, hi)

    def rng(self, stream: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_dict(self) -> dict:
        return asdict(self)

    def updated(self, **kw) -> "SuiteConfig":
        return replace(self, **kw)


def _new(title: str, cfg: SuiteConfig) -> SmoothnessReport:
    g = cfg.grid
    return SmoothnessReport(title, params={"grid": [g.dim, g.u_min, g.step, g.count],
                                           "seed": cfg.seed, "n_fields": cfg.n_fields})


def _edge_sigma(grid: LogGrid, frac: float) -> float:
    """Largest lattice |xi| not above ``frac`` of the spectral radius, so the edge bin exists.

    Coarse lattices fall back to the smallest nonzero frequency.
    """
    rad = grid.radial_frequency().ravel()
    rad = rad[rad > 0]
    below = rad[rad <= frac * grid.spectral_radius]
    return float(below.max() if below.size else rad.min())


# ---------------------------------------------------------------------------


def core_suite(cfg: SuiteConfig) -> SmoothnessReport:
    """Unitarity, round trip, translation group law and generator convergence."""
    g = cfg.grid
    rep = _new("core", cfg)
    rng = cfg.rng(1)
    worst_u = worst_rt = worst_grp = 0.0
    for _ in range(cfg.n_fields):
        f = random_field(g, rng)
        spec = mellin_transform(f)
        worst_u = max(worst_u, abs(spec.norm() - f.norm()) / f.norm())
        worst_rt = max(worst_rt, (inverse_mellin(spec) - f).norm() / f.norm())
        t, s = rng.uniform(-2, 2, size=2)
        for j in range(1, g.dim + 1):
            lhs = translate(translate(f, j, s), j, t)
            worst_grp = max(worst_grp, (lhs - translate(f, j, t + s)).norm() / f.norm())
    rep.add("Plancherel", "||M f|| vs ||f||", worst_u, 1e-10)
    rep.add("Plancherel", "inverse(M f) vs f", worst_rt, 1e-10)
    rep.add("group", "U(t)U(s) = U(t+s)", worst_grp, 1e-12)
    # the generator is the derivative of the group at 0: first-order difference quotients
    f = band_limited_random(g, _edge_sigma(g, 0.1), rng)
    exact = theta_apply(f, 1)
    errs = [((translate(f, 1, d) - f) / d - exact).norm() for d in (1e-2, 1e-3)]
    order = math.log10(errs[0] / errs[1])
    rep.values["generator_errors"] = errs
    rep.add("group", "difference-quotient order", 0.9, order)
    skew = abs(inner_product(exact, f).real) / f.norm() ** 2
    rep.add("group", "Re<Theta f, f> = 0", skew, 1e-11)
    return rep


def smoothness_suite(cfg: SuiteConfig) -> SmoothnessReport:
    g = cfg.grid
    rep = _new("smoothness", cfg)
    ladder = cfg.ladder
    r = cfg.r
    fam = reference_family(g, cfg.seed)
    n = g.dim
    lower, upper, worst_hi, worst_lo = math.inf, 0.0, 0.0, math.inf
    for name, f in fam.items():
        nf = f.norm()
        prev = 0.0
        for s in ladder.scales:
            om = mixed_modulus(f, r, s)
            # M: monotone in s and at most (2n)^r ||f||
            rep.add("M", f"{name} s={s:g} monotone", prev, om, rtol=1e-9, atol=1e-14)
            rep.add("M", f"{name} s={s:g} bound", om, (2 * n) ** r * nf, rtol=1e-12)
            if n == 1:
                rep.add("M", f"{name} s={s:g} dominates omega^r", modulus(f, 1, r, s), om,
                        rtol=1e-9)
            prev = om
            ku, ke = k_upper(f, r, s), k_exact2(f, r, s)
            ratio = ku / ke
            worst_hi, worst_lo = max(worst_hi, ratio), min(worst_lo, ratio)
            if om > 1e-12 * nf:
                lower = min(lower, ku / om)
            upper = max(upper, ku / (om + min(s**r, 1) * nf))
    rep.values["main-ineq"] = {"c": lower, "C": upper, "k_ratio_range": [worst_lo, worst_hi]}
    rep.add("main-ineq", "measured c > 0", 0.0, lower)
    rep.add("main-ineq", "measured c is not degenerate", 1.0, lower * 1e12)
    rep.add("main-ineq", "measured C finite", upper, math.inf)
    rep.add("main-ineq", "k_upper / k_exact2 >= 1", 1.0, worst_lo, rtol=1e-12)
    rep.add("main-ineq", "k_upper / k_exact2 <= 10", worst_hi, 10.0)
    for alpha in sorted({cfg.alpha, 1.0}):
        table = equivalence_table(fam, alpha, cfg)
        for chk in equivalence_checks(table, cfg):
            rep.checks.append(chk)
        rep.values[f"besov_alpha={alpha}"] = table
    return rep


def bernstein_suite(cfg: SuiteConfig) -> SmoothnessReport:
    g = cfg.grid
    rep = _new("bernstein", cfg)
    rng = cfg.rng(2)
    sigma = _edge_sigma(g, 0.1)
    for i in range(cfg.n_fields):
        shape = "ball" if i % 2 == 0 else "box"
        f = pw_project(random_field(g, rng), BandSpec(shape, sigma))
        radial = (0.5, 1, 2, 4) if shape == "ball" else ()
        sub = bernstein_check(f, sigma, max_order=4, radial_orders=radial, rtol=cfg.rtol)
        for c in sub.checks:
            c.name = f"field {i} ({shape}) {c.name}"
        rep.checks.extend(sub.checks)
        for k, mm in itertools.combinations_with_replacement(range(5), 2):
            for gen in ["radial"] + list(range(1, g.dim + 1)):
                chk = kolmogorov_stein_check(f, k, mm, gen, rtol=cfg.rtol).checks[0]
                chk.name = f"field {i} {gen} {chk.name}"
                rep.checks.append(chk)
    # Bern0 equality on the band edge
    rad = g.radial_frequency()
    idx = np.unravel_index(int(np.argmin(np.abs(rad - sigma))), g.shape)
    xi = np.array([g.freq_axis()[i] for i in idx])
    pw = plane_wave(g, xi)
    for s in (0.5, 1, 2, 4):
        lhs = laplace_mellin_apply(pw, s / 2).norm()
        rep.add("Bern0", f"edge plane wave L^({s}/2) equality", abs(lhs / (sigma**s * pw.norm()) - 1),
                1e-6)
    # Fprop: Favard constants
    K = [favard(j) for j in range(12)]
    rep.add("Fprop", "K_0 = 1", abs(K[0] - 1), 1e-10)
    rep.add("Fprop", "K_1 = pi/2", abs(K[1] - math.pi / 2), 1e-10)
    for j in range(12):
        part, tail = favard_partial_sum(j, 4000)
        rep.add("Fprop", f"K_{j} vs series", abs(K[j] - part), tail + 1e-12)
        if j % 2 == 0:
            rep.add("Fprop", f"K_{j} >= 1", 1.0, K[j], rtol=1e-15)
            rep.add("Fprop", f"K_{j} < 4/pi", K[j], 4 / math.pi)
            if j >= 2:
                rep.add("Fprop", f"K_{j - 2} < K_{j}", K[j - 2], K[j] - 1e-15)
        else:
            rep.add("Fprop", f"K_{j} > pi/4", math.pi / 4, K[j])
            rep.add("Fprop", f"K_{j} <= pi/2", K[j], math.pi / 2, rtol=1e-15)
            if j >= 3:
                rep.add("Fprop", f"K_{j} < K_{j - 2}", K[j], K[j - 2] - 1e-15)
    # limit: the type estimator
    worst = 0.0
    for frac in (0.02, 0.1, 0.3):
        sig = _edge_sigma(g, frac)
        for _ in range(max(2, cfg.n_fields // 4)):
            f = band_limited_random(g, sig, rng, edge_fraction=0.01)
            est = type_estimate(f, "radial", k_max=64)
            worst = max(worst, abs(est.value - sig) / sig)
            rep.add("limit", f"sigma={sig:.4g} flagged exponential type", 0.0,
                    float(est.exponential_type))
    rep.values["type_error"] = worst
    rep.add("limit", "|d_f - sigma| / sigma", worst, 0.02)
    # Rieszn
    f = band_limited_random(g, sigma, rng)
    exact = laplace_mellin_apply(f, 0.5) * 1j
    errs = []
    for K_terms in (1000, 2000):
        errs.append((riesz_boas(f, sigma, K_terms) - exact).norm() / exact.norm())
    rep.values["riesz_boas_errors"] = errs
    rep.add("Rieszn", "relative error at K = 1000", errs[0], 1e-2)
    rep.add("Rieszn", "error(2K) / error(K)", errs[1] / errs[0], 0.6)
    return rep


def approx_suite(cfg: SuiteConfig) -> SmoothnessReport:
    fam = reference_family(cfg.grid, cfg.seed)
    rep = direct_inverse_report(fam, alpha=cfg.alpha, q=cfg.q, r=cfg.r, m=cfg.m,
                                ladder=cfg.ladder)
    rep.params.update(_new("approx", cfg).params)
    return rep


def frames_suite(cfg: SuiteConfig) -> SmoothnessReport:
    g = cfg.grid
    rep = _new("frames", cfg)
    P = build_partition(cfg.sharpness, g)
    lam = g.radial_frequency()
    total = sum(P.F(j, lam) ** 2 for j in P.bands)
    rep.add("eqn:quad_part_identity", "sum_j F_j^2 = 1 on the lattice",
            float(np.max(np.abs(total - 1))), 1e-12)
    frames = build_frames(P, cfg.oversampling)
    a = min(fr.a for fr in frames)
    b = max(fr.b for fr in frames)
    rep.values["frames"] = [fr.summary() for fr in frames]
    rep.values["bounds"] = {"a": a, "b": b}
    for fr in frames:
        rep.add("normequiv", f"band {fr.j} a > 0", 0.0, fr.a)
        rep.add("normequiv", f"band {fr.j} b/a <= 4", fr.b / fr.a, 4.0)
    rng = cfg.rng(3)
    suite = [random_field(g, rng) for _ in range(cfg.n_fields)]
    suite += list(reference_family(g, cfg.seed).values())
    worst_pars = worst_rt = worst_rec = 0.0
    for i, f in enumerate(suite):
        nf2 = f.norm() ** 2
        bands = lp_analyze(f, P)
        worst_pars = max(worst_pars, abs(sum(b.norm() ** 2 for b in bands) - nf2) / nf2)
        worst_rt = max(worst_rt, (lp_synthesize(bands, P) - f).norm() / f.norm())
        coeffs = frame_analyze(f, frames, P)
        e = coeffs.energy()
        rep.add("normequiv", f"field {i} a||f||^2 <= sum|c|^2", a * nf2, e, rtol=1e-10)
        rep.add("normequiv", f"field {i} sum|c|^2 <= b||f||^2", e, b * nf2, rtol=1e-10)
        for fr, band in zip(frames, bands):
            eb = coeffs.energy(fr.j)
            nb = band.norm() ** 2
            rep.add("normequiv", f"field {i} band {fr.j} lower", fr.a * nb, eb, rtol=1e-10,
                    atol=1e-30)
            rep.add("normequiv", f"field {i} band {fr.j} upper", eb, fr.b * nb, rtol=1e-10,
                    atol=1e-30)
        rec = frame_reconstruct(coeffs, frames, P)
        worst_rec = max(worst_rec, (rec - f).norm() / f.norm())
    rep.add("Decomp", "sum_j ||F_j f||^2 = ||f||^2", worst_pars, 1e-9)
    rep.add("eqn:quad_part_identity", "sum_j F_j F_j f = f", worst_rt, 1e-10)
    rep.add("normequiv", "dual-frame reconstruction", worst_rec, 1e-8)
    for fr in frames[: min(3, len(frames))]:
        da, db = fr.dual_bounds()
        rep.add("normequiv", f"band {fr.j} dual lower bound ~ 1/b", abs(da * fr.b - 1), 1e-6)
        rep.add("normequiv", f"band {fr.j} dual upper bound ~ 1/a", abs(db * fr.a - 1), 1e-6)
    return rep


# ---------------------------------------------------------------------------
# norm equivalences


def _forms_for(alpha: float, r: int) -> list[str]:
    forms = ["mixed", "K", "laplace"] if alpha < r else ["laplace"]
    forms.append("zygmund" if float(alpha).is_integer() else "modulus")
    return forms


_FORM_TAGS = {"modulus": "Bnorm1", "zygmund": "Bnorm2", "mixed": "Bnorm3", "K": "Bnorm3",
              "laplace": "Bnorm30", "bands": "normequiv-1", "coeffs": "normequiv",
              "approx": "d-d"}


def equivalence_table(family: dict, alpha: float, cfg: SuiteConfig) -> dict:
    """All Besov norm forms of every family member: ``{field: {form: value}}``."""
    first = next(iter(family.values()))
    grid = first.grid
    params = SmoothnessParams(p=2, q=cfg.q, alpha=alpha, r=max(cfg.r, math.floor(alpha) + 1))
    P = build_partition(cfg.sharpness, grid)
    frames = build_frames(P, cfg.oversampling)
    out = {}
    for name, f in family.items():
        row = {form: besov_norm(f, params, cfg.ladder, form) for form in _forms_for(alpha, params.r)}
        row["bands"] = besov_from_bands(f, P, alpha, cfg.q)
        row["coeffs"] = besov_from_coeffs(frame_analyze(f, frames, P), alpha, cfg.q)
        row["approx"] = approx_space_norm(f, alpha, cfg.q, cfg.ladder)
        out[name] = row
    return out


def equivalence_checks(table: dict, cfg: SuiteConfig) -> list[Check]:
    """Spread and stability checks for every pair of forms.

    For a pair ``(A, B)`` the ratios ``A(f)/B(f)`` over the family must have
    ``max/min <= equivalence_spread`` and each ratio must lie within a factor
    ``equivalence_stability`` of their geometric mean.
    """
    rows = list(table.values())
    forms = list(rows[0])
    checks = []
    for a, b in itertools.combinations(forms, 2):
        ratios = np.array([row[a] / row[b] for row in rows])
        spread = float(ratios.max() / ratios.min())
        center = float(np.exp(np.mean(np.log(ratios))))
        dev = float(max(ratios.max() / center, center / ratios.min()))
        tag = _FORM_TAGS[a] if a not in ("mixed",) else _FORM_TAGS[b]
        for lhs, rhs, what in ((spread, cfg.equivalence_spread, "spread"),
                               (dev, cfg.equivalence_stability, "stability")):
            checks.append(Check(tag, f"{a}/{b} {what}", lhs, rhs, bool(lhs <= rhs),
                                {"ratios": ratios.tolist(), "center": center}))
    return checks


# ---------------------------------------------------------------------------


_RUNNERS = {
    "core": core_suite,
    "smoothness": smoothness_suite,
    "bernstein": bernstein_suite,
    "approx": approx_suite,
    "frames": frames_suite,
}


def run_suite(name: str, cfg: SuiteConfig) -> SmoothnessReport:
    if name == "all":
        return merge_reports([_RUNNERS[s](cfg) for s in SUITES], "all", cfg)
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {('all',) + SUITES}")
    return _RUNNERS[name](cfg)


def merge_reports(reports: list[SmoothnessReport], title: str, cfg: SuiteConfig) -> SmoothnessReport:
    out = SmoothnessReport(title, params=cfg.as_dict())
    for r in reports:
        out.values[r.title] = r.values
        out.checks.extend(r.checks)
    return out
