from __future__ import annotations

import json
import math

import pytest

from totalvalue.verify import (
    FAILURE,
    FOLDED,
    MISMATCH,
    PASS,
    PROFILES,
    REGISTRY,
    report_json,
    resolve_id,
    run_all,
    run_check,
    summarize,
)


@pytest.fixture(scope="module")
def reports():
    return run_all()


def test_registry_has_24_checks():
    assert len(REGISTRY) == 24
    assert list(REGISTRY) == sorted(REGISTRY)


def test_default_run(reports):
    s = summarize(reports)
    assert s == {"pass": 23, "mismatch": 1, "failure": 0, "total": 24}
    assert [r.id for r in reports if r.status == MISMATCH] == ["eq63_sin_over_k"]


def test_every_report_within_tolerance(reports):
    for r in reports:
        assert r.abs_error <= r.tolerance, r.id
        assert r.status in (PASS, MISMATCH)


def test_sin_over_k_mismatch_details():
    for tau0 in (0.5, 1.0):
        r = run_check("eq63", tau0=tau0)
        assert r.status == MISMATCH
        assert abs(r.oracle[0] - (math.pi - tau0) / 2) <= 1e-12
        assert abs(r.computed[0] - (math.pi - tau0) / 2) <= 1e-6
        assert abs(r.claimed[0] - (math.pi / 2 + tau0 / 2)) <= 1e-12


def test_greek_parameter_aliases():
    a = run_check("eq63", τ0=1.0)
    b = run_check("eq63", tau0=1.0)
    assert a.computed == b.computed
    r = run_check("eq6", n=1, α=math.pi / 4)
    assert r.status == PASS and r.computed[0] == pytest.approx(2.0)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("alpha", [math.pi / 6, math.pi / 4, math.pi / 3])
def test_quadrature_identity_overrides(n, alpha):
    r = run_check("eq6_quadrature_identity", {"n": n, "alpha": alpha})
    want = math.sin(2 * n * alpha) / (n * math.sin(alpha) ** (2 * n))
    assert r.status == PASS
    assert abs(r.computed[0] - want) <= 1e-9


def test_deterministic_without_runtime():
    a = [run_check(cid).to_dict(runtime=False) for cid in ("eq36", "eq39", "eq63")]
    b = [run_check(cid).to_dict(runtime=False) for cid in ("eq36", "eq39", "eq63")]
    assert a == b


def test_equation_numbers_resolve():
    for n in [*range(2, 8), *range(36, 64)]:
        assert resolve_id(f"eq{n}") in REGISTRY
    for key, target in FOLDED.items():
        assert resolve_id(key) == target


def test_unknown_id():
    with pytest.raises(KeyError):
        resolve_id("eq99")


def test_equation_labels():
    assert REGISTRY["eq2_7_circle_pole"].equation == "2-7"
    assert REGISTRY["eq47_total_zero"].equation == "47"
    assert REGISTRY["conclusion_sums"].equation == "conclusion"


def test_strict_profile_tightens():
    assert PROFILES["strict"] < PROFILES["default"]
    r = run_check("eq47", profile="strict")
    assert r.tolerance == pytest.approx(1e-8)
    assert r.status == FAILURE
    assert run_check("eq36", profile="strict").status == PASS


def test_unknown_profile():
    with pytest.raises(ValueError):
        run_check("eq36", profile="lenient")


def test_exception_becomes_failure():
    r = run_check("eq6", n=0)
    assert r.status == FAILURE
    assert "error" in r.details


def test_report_json(reports):
    data = json.loads(report_json(reports, runtime=False))
    assert len(data) == 25
    assert data[-1] == {"summary": summarize(reports)}
    first = data[0]
    for key in ("id", "equation", "claim", "computed", "oracle", "status", "tolerance"):
        assert key in first
    assert "runtime" not in first
