import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from logmellin import read_field, read_spectrum, xp_norm
from logmellin.cli import main

GRID = "1,-4,0.0625,128"


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def field(tmp_path):
    path = tmp_path / "f.mlf"
    assert run("generate", "band-limited-random", "--sigma", 10, "--grid", GRID,
               "--seed", 3, "--out", path) == 0
    return path


def test_generate_kinds(tmp_path):
    for kind, extra in (("plane-wave", ["--xi", "2.5"]), ("log-gaussian", ["--width", "0.5"]),
                        ("two-frequency", ["--xi", "1,3"])):
        out = tmp_path / f"{kind}.mlf"
        assert run("generate", kind, "--grid", GRID, "--out", out, *extra) == 0
        assert read_field(out).grid.count == 128


def test_generate_needs_out():
    assert run("generate", "log-gaussian", "--grid", GRID) == 2


def test_transform_round_trip(field, tmp_path):
    spec, back = tmp_path / "s.mlf", tmp_path / "b.mlf"
    assert run("transform", field, "--out", spec) == 0
    read_spectrum(spec)
    assert run("transform", spec, "--out", back) == 0
    f, g = read_field(field), read_field(back)
    assert xp_norm(f - g) <= 1e-12 * xp_norm(f)


def test_bernstein_and_type(field, capsys):
    assert run("bernstein-check", field, "--sigma", 10) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and rep["checks"]
    assert run("bernstein-check", field, "--sigma", 1) == 1
    capsys.readouterr()
    assert run("type", field) == 0
    est = json.loads(capsys.readouterr().out)
    assert est["type"] <= 10 * (1 + 1e-9) and est["exponential_type"]


def test_norm_commands(field, capsys, tmp_path):
    assert run("besov", field, "--alpha", 0.5) == 0
    out = json.loads(capsys.readouterr().out)
    assert "mixed" in json.dumps(out)
    assert run("k-functional", field, "--t", "0.1,1") == 0
    capsys.readouterr()
    assert run("best-approx", field, "--sigma", 4) == 0
    capsys.readouterr()
    assert run("riesz-boas", field, "--sigma", 10, "--K", 200, "--out", tmp_path / "rb.mlf") == 0
    assert run("jackson", field, "--sigma", 6, "--out", tmp_path / "j.mlf") == 0
    assert run("project", field, "--sigma", 4, "--out", tmp_path / "p.mlf") == 0


def test_decompose_reconstruct(field, tmp_path, capsys):
    coeffs, rec = tmp_path / "c.csv", tmp_path / "r.mlf"
    assert run("decompose", field, "--out", coeffs) == 0
    with open(coeffs) as fh:
        assert next(csv.reader(fh)) == ["j", "k", "re", "im"]
    assert run("reconstruct", coeffs, "--grid", GRID, "--out", rec) == 0
    f, g = read_field(field), read_field(rec)
    assert xp_norm(f - g) <= 1e-8 * xp_norm(f)
    assert run("reconstruct", coeffs, "--out", rec) == 2
    capsys.readouterr()
    assert run("besov-frames", field) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["coeffs"] > 0 and out["bands"] > 0


def test_corrupted_header_is_io_error(tmp_path, capsys):
    bad = tmp_path / "bad.mlf"
    bad.write_text("MLF9 1 0 0.1 2\n0 0\n0 0\n")
    assert run("besov", bad) == 3
    captured = capsys.readouterr()
    assert captured.out == ""
    assert run("type", tmp_path / "missing.mlf") == 3


def test_verify_frames_suite_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("verify", "--suite", "frames", "--grid", GRID, "--seed", 7, "--out", out) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    tags = {c["tag"] for c in rep["checks"]}
    assert {"Decomp", "normequiv", "eqn:quad_part_identity"} <= tags


def test_verify_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("suite = frames\ngrid = 1,-4,0.0625,128\nseed = 1\nn_fields = 3\n")
    out1, out2 = tmp_path / "1.json", tmp_path / "2.json"
    assert run("verify", "--config", cfg, "--out", out1) == 0
    assert run("verify", "--config", cfg, "--seed", 2, "--out", out2) == 0
    r1, r2 = json.loads(out1.read_text()), json.loads(out2.read_text())
    assert r1["params"]["seed"] == 1 and r2["params"]["seed"] == 2
    assert r1["params"]["n_fields"] == 3


def test_verify_config_errors(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    assert run("verify", "--config", cfg) == 2
    cfg.write_text("seed = many\n")
    assert run("verify", "--config", cfg) == 2
    assert run("verify", "--config", tmp_path / "none.cfg") == 3
    assert run("verify", "--suite", "bogus") == 2


def test_table_besov_rows(tmp_path):
    out = tmp_path / "t.csv"
    assert run("table", "besov", "--grid", GRID, "--out", out) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0][0] == "functional" and len(rows) == 1 + 15


def test_table_modulus_monotone(tmp_path):
    out = tmp_path / "m.csv"
    assert run("table", "modulus", "--grid", GRID, "--out", out) == 0
    rows = list(csv.reader(out.open()))[1:]
    for col in (2, 3):
        vals = [float(r[col]) for r in rows]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_table_errors():
    assert run("table", "besov", "--alphas", "", "--grid", GRID) == 2
    assert run("table", "besov", "--forms", "nope", "--grid", GRID) == 2
    assert run("table", "k", "--grid", GRID, "--nu-min", 3, "--nu-max", 1) == 2


def test_usage_errors():
    assert run("besov") == 2
    assert run("generate", "log-gaussian", "--grid", "1,2") == 2
    assert run("generate", "log-gaussian", "--grid", "1,0,-1,8", "--out", "x") == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "logmellin", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "verify" in proc.stdout
