"""``logmellin`` command-line interface.

Exit codes: 0 success (all checks pass), 1 a check failed, 2 usage or
configuration error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import io as mlf
from .approx import approx_space_norm, best_approx, jackson_apply
from .bernstein import BandSpec, bernstein_check, pw_project, riesz_boas, type_estimate
from .fields import band_limited_random, lattice_frequency, log_gaussian, plane_wave, two_frequency
from .frames import (besov_from_bands, besov_from_coeffs, build_frames, build_partition,
                     frame_analyze, frame_reconstruct, read_coefficients, write_coefficients)
from .grid import LogGrid, make_log_grid, parse_exponent
from .report import SmoothnessReport, _clean
from .smoothness import (BESOV_FORMS, ScaleLadder, SmoothnessParams, besov_norm, default_ladder,
                         k_exact2, k_upper, mixed_modulus)
from .spectral import inverse_mellin, laplace_mellin_apply, mellin_transform
from .suites import SUITES, SuiteConfig, run_suite

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# helpers


def _parse_grid(text: str | None) -> LogGrid | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--grid expects n,u_min,h,M")
    try:
        return make_log_grid(int(parts[0]), float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise UsageError(f"bad --grid: {exc}") from None


def _default_grid(args) -> LogGrid:
    return args.grid_obj or SuiteConfig().grid


def _ladder(args, grid: LogGrid) -> ScaleLadder:
    base = default_ladder(grid)
    lo = args.nu_min if args.nu_min is not None else base.nu_min
    hi = args.nu_max if args.nu_max is not None else base.nu_max
    try:
        return ScaleLadder(lo, hi)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit_text(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    if isinstance(obj, SmoothnessReport):
        text = obj.to_json()
    else:
        text = json.dumps(_clean(obj), indent=2, sort_keys=True)
    _emit_text(args, text + "\n")


def _need_out(args) -> str:
    if not args.out:
        raise UsageError("this command writes a file; pass --out PATH")
    return args.out


def _floats(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None
    return vals


def _band(args) -> BandSpec:
    return BandSpec(args.band, args.sigma)


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    grid = _default_grid(args)
    rng = np.random.default_rng(args.seed)
    kind = args.kind
    if kind == "plane-wave":
        xi = _floats(args.xi) if args.xi else [1.0]
        xi = [lattice_frequency(grid, x) for x in xi]
        f = plane_wave(grid, xi if len(xi) > 1 else xi[0])
    elif kind == "log-gaussian":
        f = log_gaussian(grid, args.width, args.center)
    elif kind == "band-limited-random":
        f = band_limited_random(grid, args.sigma, rng, shape=args.band,
                                edge_fraction=args.edge_fraction)
    elif kind == "two-frequency":
        xi = _floats(args.xi) if args.xi else [1.0, 2.0]
        if len(xi) != 2:
            raise UsageError("two-frequency needs --xi a,b")
        f = two_frequency(grid, lattice_frequency(grid, xi[0]), lattice_frequency(grid, xi[1]))
    elif kind == "csv":
        if not args.csv:
            raise UsageError("csv import needs --csv PATH")
        f = mlf.import_csv(args.csv, grid)
    else:  # argparse restricts choices
        raise UsageError(kind)
    mlf.write_field(f, _need_out(args), args.format)
    return EXIT_OK


def cmd_transform(args) -> int:
    obj = mlf.read_any(args.input)
    out = _need_out(args)
    if isinstance(obj, mlf.MellinSpectrum):
        mlf.write_field(inverse_mellin(obj), out, args.format)
    else:
        mlf.write_spectrum(mellin_transform(obj), out, args.format)
    return EXIT_OK


def cmd_project(args) -> int:
    f = mlf.read_field(args.input)
    mlf.write_field(pw_project(f, _band(args)), _need_out(args), args.format)
    return EXIT_OK


def cmd_bernstein_check(args) -> int:
    f = mlf.read_field(args.input)
    rep = bernstein_check(f, args.sigma, args.p, max_order=args.max_order)
    _emit_json(args, rep)
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_type(args) -> int:
    f = mlf.read_field(args.input)
    gen = args.generator if args.generator == "radial" else int(args.generator)
    est = type_estimate(f, gen, k_max=args.k_max, p=args.p)
    _emit_json(args, {"type": est.value, "root": est.root_value,
                      "exponential_type": est.exponential_type, "k_max": args.k_max,
                      "ratios": est.ratios, "roots": est.roots})
    return EXIT_OK


def cmd_riesz_boas(args) -> int:
    f = mlf.read_field(args.input)
    out = riesz_boas(f, args.sigma, args.K)
    exact = laplace_mellin_apply(f, 0.5) * 1j
    err = (out - exact).norm() / exact.norm() if exact.norm() > 0 else 0.0
    if args.out:
        mlf.write_field(out, args.out, args.format)
    sys.stdout.write(json.dumps({"K": args.K, "sigma": args.sigma,
                                 "relative_error": err}, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_jackson(args) -> int:
    f = mlf.read_field(args.input)
    mlf.write_field(jackson_apply(f, args.axis, args.sigma, args.m), _need_out(args), args.format)
    return EXIT_OK


def cmd_best_approx(args) -> int:
    f = mlf.read_field(args.input)
    val = best_approx(f, _band(args), args.p, args.m)
    _emit_json(args, {"E": val, "band": args.band, "sigma": args.sigma, "p": args.p,
                      "upper_bound": parse_exponent(args.p) != 2})
    return EXIT_OK


def cmd_besov(args) -> int:
    f = mlf.read_field(args.input)
    ladder = _ladder(args, f.grid)
    params = SmoothnessParams(p=args.p, q=args.q, alpha=args.alpha, r=args.r)
    forms = BESOV_FORMS if args.form == "all" else (args.form,)
    out = {}
    for form in forms:
        try:
            out[form] = besov_norm(f, params, ladder, form)
        except ValueError as exc:
            if args.form != "all":
                raise UsageError(str(exc)) from None
            out[form] = None
    _emit_json(args, {"alpha": args.alpha, "p": args.p, "q": args.q, "r": args.r, "norms": out})
    return EXIT_OK


def cmd_k_functional(args) -> int:
    f = mlf.read_field(args.input)
    ts = _floats(args.t) if args.t else list(_ladder(args, f.grid).scales)
    rows = []
    for t in ts:
        row = {"t": t, "k_upper": k_upper(f, args.r, t, args.p),
               "mixed_modulus": mixed_modulus(f, args.r, t, args.p)}
        if parse_exponent(args.p) == 2:
            row["k_exact2"] = k_exact2(f, args.r, t)
        rows.append(row)
    _emit_json(args, {"r": args.r, "p": args.p, "rows": rows})
    return EXIT_OK


def _frames_for(grid, args):
    P = build_partition(args.sharpness, grid)
    return P, build_frames(P, args.oversampling, args.taper)


def cmd_decompose(args) -> int:
    f = mlf.read_field(args.input)
    P, frames = _frames_for(f.grid, args)
    coeffs = frame_analyze(f, frames, P)
    write_coefficients(coeffs, _need_out(args))
    sys.stdout.write(json.dumps(_clean({"frames": [fr.summary() for fr in frames]}),
                                sort_keys=True) + "\n")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    if args.grid_obj is None:
        raise UsageError("reconstruct needs --grid to rebuild the frames")
    P, frames = _frames_for(args.grid_obj, args)
    coeffs = read_coefficients(args.input, frames)
    mlf.write_field(frame_reconstruct(coeffs, frames, P), _need_out(args), args.format)
    return EXIT_OK


def cmd_besov_frames(args) -> int:
    f = mlf.read_field(args.input)
    P, frames = _frames_for(f.grid, args)
    _emit_json(args, {"alpha": args.alpha, "q": args.q,
                      "bands": besov_from_bands(f, P, args.alpha, args.q),
                      "coeffs": besov_from_coeffs(frame_analyze(f, frames, P), args.alpha, args.q),
                      "frames": [fr.summary() for fr in frames]})
    return EXIT_OK


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise mlf.FieldFileError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"bad config file: {exc}") from None
    return dict(parser["run"])


_CONFIG_TYPES = {"dim": int, "u_min": float, "step": float, "count": int, "seed": int,
                 "n_fields": int, "nu_min": int, "nu_max": int, "alpha": float, "q": float,
                 "r": int, "m": int, "oversampling": float, "sharpness": float, "rtol": float,
                 "equivalence_spread": float, "equivalence_stability": float}


def _suite_config(args) -> tuple[SuiteConfig, str]:
    raw = _load_config(args.config)
    suite = raw.pop("suite", None)
    out = raw.pop("out", None)
    if args.out is None and out:
        args.out = out
    if "grid" in raw:
        raw.update(_grid_dict(_parse_grid(raw.pop("grid"))))
    kw = {}
    for key, val in raw.items():
        if key not in _CONFIG_TYPES:
            raise UsageError(f"unknown config key {key!r}")
        try:
            kw[key] = _CONFIG_TYPES[key](val)
        except ValueError:
            raise UsageError(f"config key {key!r}: cannot parse {val!r}") from None
    # flags win over the file
    if args.grid_obj is not None:
        kw.update(_grid_dict(args.grid_obj))
    for key in ("seed", "nu_min", "nu_max", "n_fields"):
        val = getattr(args, key, None)
        if val is not None:
            kw[key] = val
    suite = args.suite or suite or "all"
    if suite != "all" and suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}")
    try:
        cfg = SuiteConfig(**kw)
        cfg.grid  # validate
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad configuration: {exc}") from None
    return cfg, suite


def _grid_dict(g: LogGrid) -> dict:
    return {"dim": g.dim, "u_min": g.u_min, "step": g.step, "count": g.count}


def cmd_verify(args) -> int:
    cfg, suite = _suite_config(args)
    rep = run_suite(suite, cfg)
    _emit_json(args, rep)
    if not rep.passed:
        for c in rep.failures():
            sys.stderr.write(f"FAIL [{c.tag}] {c.name}: {c.lhs:.6g} > {c.rhs:.6g}\n")
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_verify_direct_inverse(args) -> int:
    args.suite = "approx"
    return cmd_verify(args)


def _sweep_field(args, grid):
    if args.input:
        return mlf.read_field(args.input)
    return log_gaussian(grid, 1.0)


def cmd_table(args) -> int:
    grid = _default_grid(args)
    f = _sweep_field(args, grid)
    ladder = _ladder(args, f.grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    func = args.functional
    if func in ("besov", "approx-norm"):
        alphas = _floats(args.alphas)
        if not alphas:
            raise UsageError("empty sweep: pass --alphas")
        if func == "besov":
            forms = BESOV_FORMS if args.forms == "all" else tuple(args.forms.split(","))
            bad = [fm for fm in forms if fm not in BESOV_FORMS]
            if bad or not forms:
                raise UsageError(f"bad --forms {args.forms!r}")
            w.writerow(["functional", "alpha", "form", "p", "q", "r", "value"])
            for a in alphas:
                r = max(args.r, math.floor(a) + 1)
                params = SmoothnessParams(p=args.p, q=args.q, alpha=a, r=r)
                for fm in forms:
                    try:
                        val = besov_norm(f, params, ladder, fm)
                    except ValueError:
                        val = math.nan  # form undefined for this alpha
                    w.writerow(["besov", a, fm, args.p, args.q, r, repr(float(val))])
        else:
            w.writerow(["functional", "alpha", "q", "value"])
            for a in alphas:
                w.writerow(["approx-norm", a, args.q, repr(approx_space_norm(f, a, args.q, ladder))])
    elif func in ("modulus", "k"):
        scales = ladder.scales
        if scales.size == 0:
            raise UsageError("empty sweep: ladder has no scales")
        if func == "modulus":
            orders = list(range(1, args.r + 1))
            w.writerow(["functional", "s"] + [f"Omega^{k}" for k in orders])
            for s in scales:
                w.writerow(["modulus", repr(float(s))]
                           + [repr(mixed_modulus(f, k, s, args.p)) for k in orders])
        else:
            w.writerow(["functional", "t", "k_upper", "k_exact2"])
            for s in scales:
                ke = k_exact2(f, args.r, s) if parse_exponent(args.p) == 2 else math.nan
                w.writerow(["k", repr(float(s)), repr(k_upper(f, args.r, s, args.p)), repr(ke)])
    _emit_text(args, buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _global_flags() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--grid", help="lattice as n,u_min,h,M")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default=None, help="output path (stdout for reports if omitted)")
    g.add_argument("--format", choices=("text", "binary"), default="text")
    g.add_argument("--nu-min", dest="nu_min", type=int, default=None)
    g.add_argument("--nu-max", dest="nu_max", type=int, default=None)
    return g


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logmellin",
                                     description="Mellin analysis on log-uniform lattices.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_flags()]

    def add(name, func, help_text, field_input=True):
        p = sub.add_parser(name, parents=common, help=help_text)
        if field_input:
            p.add_argument("input", help="input MLF file")
        p.set_defaults(func=func)
        return p

    def band_opts(p, required=True):
        p.add_argument("--band", choices=("box", "ball"), default="ball")
        p.add_argument("--sigma", type=float, required=required, default=None if required else 4.0)

    p = add("generate", cmd_generate, "write a test field", field_input=False)
    p.add_argument("kind", choices=("plane-wave", "log-gaussian", "band-limited-random",
                                    "two-frequency", "csv"))
    p.add_argument("--xi", help="frequency (comma list for vectors or two-frequency)")
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--edge-fraction", dest="edge_fraction", type=float, default=0.0)
    p.add_argument("--csv", help="x,value samples to resample (kind csv)")
    band_opts(p, required=False)

    add("transform", cmd_transform, "field <-> spectrum")
    p = add("project", cmd_project, "Paley-Wiener projection")
    band_opts(p)
    p = add("bernstein-check", cmd_bernstein_check, "Bernstein inequalities report")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--p", default="2")
    p.add_argument("--max-order", dest="max_order", type=int, default=4)
    p = add("type", cmd_type, "exponential type estimate")
    p.add_argument("--generator", default="radial", help="'radial' or a 1-based axis")
    p.add_argument("--k-max", dest="k_max", type=int, default=64)
    p.add_argument("--p", default="2")
    p = add("riesz-boas", cmd_riesz_boas, "Riesz-Boas series for i L^(1/2) f")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--K", type=int, default=1000)
    p = add("jackson", cmd_jackson, "apply the Jackson operator along one axis")
    p.add_argument("--axis", type=int, default=1)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--m", type=int, default=1)
    p = add("best-approx", cmd_best_approx, "best approximation error by band-limited fields")
    band_opts(p)
    p.add_argument("--p", default="2")
    p.add_argument("--m", type=int, default=2)
    p = add("besov", cmd_besov, "Besov-Mellin norms")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--p", default="2")
    p.add_argument("--q", default="2")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--form", choices=BESOV_FORMS + ("all",), default="all")
    p = add("k-functional", cmd_k_functional, "K-functional estimates")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--p", default="2")
    p.add_argument("--t", help="comma list of parameters (default: the ladder)")

    def frame_opts(p):
        p.add_argument("--oversampling", type=float, default=2.0)
        p.add_argument("--sharpness", type=float, default=1.0)
        p.add_argument("--taper", choices=("cosine", "flat"), default="cosine")

    frame_opts(add("decompose", cmd_decompose, "frame coefficients as CSV j,k,re,im"))
    p = add("reconstruct", cmd_reconstruct, "dual-frame reconstruction from a coefficient CSV")
    frame_opts(p)
    p = add("besov-frames", cmd_besov_frames, "Besov norms from bands and frame coefficients")
    frame_opts(p)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--q", default="2")

    for name, func in (("verify", cmd_verify), ("verify-direct-inverse", cmd_verify_direct_inverse)):
        p = add(name, func, "run verification suites", field_input=False)
        p.add_argument("--suite", choices=("all",) + SUITES, default=None)
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--n-fields", dest="n_fields", type=int, default=None)

    p = add("table", cmd_table, "parameter sweeps as CSV", field_input=False)
    p.add_argument("functional", choices=("besov", "k", "modulus", "approx-norm"))
    p.add_argument("--input", help="MLF field (default: unit log-Gaussian)")
    p.add_argument("--alphas", default="0.5,1,1.5")
    p.add_argument("--forms", default="all")
    p.add_argument("--p", default="2")
    p.add_argument("--q", default="2")
    p.add_argument("--r", type=int, default=2)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    for key in ("p", "q"):
        if hasattr(args, key):
            try:
                setattr(args, key, parse_exponent(getattr(args, key)))
            except ValueError as exc:
                sys.stderr.write(f"error: --{key}: {exc}\n")
                return EXIT_USAGE
    try:
        args.grid_obj = _parse_grid(args.grid)
        if args.seed is None and args.command not in ("verify", "verify-direct-inverse"):
            args.seed = 0
        return args.func(args)
    except OSError as exc:  # includes FieldFileError
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
