from fractions import Fraction

import pytest

import newton_critic as nc


def test_schema_version():
    assert nc.SCHEMA == "newton-critic/1"


def test_first_worked_example():
    r = nc.critical("(theta - v)^3 * v + v^3")
    assert nc.exact(r["p_gamma"]) == 3
    assert r["certification"]["exact"]


def test_trace_contains_collapse():
    r = nc.critical("(theta + exp(v) - 1)^3*v + v^2", trace=True)
    assert nc.exact(r["p_gamma"]) == 3
    kinds = [e["kind"] for e in r["trace"]]
    assert "ScenarioTwoCollapse" in kinds
    assert r["certification"]["label"] == "UpToOrder(12)"


def test_classify_case_two():
    r = nc.classify("v*theta + v^2*theta^2")
    assert r["verdict"] == "Degenerate"
    assert r["case"] == 2


def test_diagram_distance():
    r = nc.diagram("v*theta^4 + v^3*theta + v^2")
    assert nc.exact(r["d_gamma"]) == Fraction(5, 2)
    assert nc.exact(r["p0"]) == 2


def test_errors_carry_codes():
    with pytest.raises(nc.NewtonCriticError) as info:
        nc.critical("theta^2")
    assert info.value.code == "DegenerateInput"
    with pytest.raises(nc.NewtonCriticError) as info:
        nc.classify("v*)")
    assert info.value.code == "Syntax"
    assert info.value.offset == 2
    with pytest.raises(nc.NewtonCriticError) as info:
        nc.critical("(theta + exp(v) - 1)^3*v + v^2", max_depth=0)
    assert info.value.code == "MaxDepthExceeded"
    assert info.value.partial_trace[0]["kind"] == "InitD"


def test_resolution_verifies():
    (report,) = nc.verify_resolution("(theta - v)^2 - v^3", samples=2000)
    assert report["ok"]
    assert report["uncovered"] == 0 and report["overlapping"] == 0
    trees = nc.resolve("theta^2 - v^2", all_quadrants=True)
    assert [t["quadrant"] for t in trees] == ["++", "+-", "-+", "--"]


def test_small_probes():
    k = nc.knapp_probe("v*(1 + theta^2)", 4, grid_level=6, v_samples=64, theta_samples=128)
    assert k["kind"] == "knapp" and len(k["ratios"]) == 4
    b = nc.blowup_probe("v*theta", first=2)
    assert b["family"] == "lines" and b["degenerate"] and b["case"] == 1
    assert len(b["ratios"]) == 3
