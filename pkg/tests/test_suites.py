import json

import pytest

from logmellin import SUITES, SuiteConfig, run_suite
from logmellin.report import SmoothnessReport

REQUIRED_TAGS = {"Bernstein", "Lem", "limit", "KSM", "Fprop", "M", "Bnorm1", "Bnorm2", "Bnorm3",
                 "main-ineq", "100", "200", "ap-mod", "d-d", "LimitingJackson", "Bern0", "Rieszn",
                 "Decomp", "eqn:quad_part_identity", "normequiv", "normequiv-1"}

SMALL1 = SuiteConfig(count=256, step=1 / 16, n_fields=3)
SMALL2 = SuiteConfig(dim=2, count=32, step=1 / 8, n_fields=2)


@pytest.fixture(scope="module")
def all_small1():
    return run_suite("all", SMALL1)


def test_all_suite_small_grid_passes(all_small1):
    assert all_small1.passed, [(c.tag, c.name) for c in all_small1.failures()]


def test_tag_coverage(all_small1):
    assert REQUIRED_TAGS <= all_small1.tags()


@pytest.mark.parametrize("name", ["core", "bernstein", "approx", "frames"])
def test_suites_small_2d(name):
    rep = run_suite(name, SMALL2)
    assert rep.passed, [(c.tag, c.name, c.lhs, c.rhs) for c in rep.failures()]


def test_report_is_deterministic():
    a = run_suite("frames", SMALL1).to_json()
    b = run_suite("frames", SMALL1).to_json()
    assert a == b
    c = run_suite("frames", SMALL1.updated(seed=5)).to_json()
    assert a != c


def test_report_json_shape(all_small1):
    d = json.loads(all_small1.to_json())
    assert set(d) == {"title", "passed", "params", "values", "checks"}
    assert d["params"]["count"] == 256
    assert all({"tag", "name", "lhs", "rhs", "passed"} <= set(c) for c in d["checks"])


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("everything", SMALL1)
    assert SUITES == ("core", "smoothness", "bernstein", "approx", "frames")


def test_suite_config_defaults():
    g1, g2 = SuiteConfig().grid, SuiteConfig(dim=2).grid
    assert (g1.count, g1.step, g1.u_min) == (1024, 1 / 64, -8.0)
    assert (g2.count, g2.step, g2.u_min) == (128, 1 / 16, -4.0)
    assert "seed" in SuiteConfig.keys()


def test_report_add_semantics():
    rep = SmoothnessReport("t")
    assert rep.add("x", "finite vs inf", 1.0, float("inf")).passed
    assert not rep.add("x", "nan rhs", 1.0, float("nan")).passed
    assert not rep.add("x", "inf lhs", float("inf"), float("inf")).passed
    assert rep.add("x", "rtol", 1.0 + 1e-10, 1.0, rtol=1e-9).passed
    assert not rep.passed and len(rep.failures()) == 2
    assert json.loads(rep.to_json())["checks"][1]["rhs"] == "nan"
