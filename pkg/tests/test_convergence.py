from __future__ import annotations

import json
import math
import random

import numpy as np
import pytest

from totalvalue.convergence import (
    DETOURED,
    SEGMENT,
    SEMICIRCLE,
    ConvergenceQuery,
    Interval,
    convergence_semi_interval,
    damping_condition,
    detour_exact_bound,
    ray_limit_check,
)

HALF_COT = "sin(t)/(2*(1-cos(t)))"
THETAS = np.linspace(-math.pi, 0.0, 401)[1:-1]


def test_semicircle_interval():
    iv = convergence_semi_interval(path=SEMICIRCLE)
    assert (iv.lo, iv.hi, iv.lo_closed, iv.hi_closed) == (-math.pi / 2, 0.0, False, True)
    assert str(iv) == f"({-math.pi / 2!r}, 0.0]"


def test_detour_interval_is_arctan_k():
    iv = convergence_semi_interval(1.0, 0.25)
    assert iv.hi == pytest.approx(math.atan(3.0))
    assert iv.contains(iv.hi) and not iv.contains(-math.pi / 2)


def test_zero_limit_interval():
    iv = convergence_semi_interval(zero_limit=True)
    assert iv.hi == pytest.approx(math.pi / 2) and not iv.hi_closed


def test_interval_argument_checks():
    with pytest.raises(ValueError):
        convergence_semi_interval(1.0, 2.0)
    with pytest.raises(ValueError):
        convergence_semi_interval(path="spiral")
    with pytest.raises(ValueError):
        convergence_semi_interval()


def test_eps_equal_t_gives_zero_bound():
    assert convergence_semi_interval(1.0, 1.0).hi == 0.0


def test_damping_condition_examples():
    q = ConvergenceQuery(1.0, -1.0, 0.0)
    ok, value = damping_condition(q, -math.pi / 2)
    assert ok and value == pytest.approx(1.0)
    q = ConvergenceQuery(1.0, -1.0, 0.6 * math.pi)
    assert not all(damping_condition(q, th)[0] for th in THETAS)


def test_query_validation():
    with pytest.raises(ValueError):
        ConvergenceQuery(0.0, 1.0)
    with pytest.raises(ValueError):
        ConvergenceQuery(1.0, -1.0, path=DETOURED)
    with pytest.raises(ValueError):
        ConvergenceQuery(1.0, -1.0, phi=4.0)
    with pytest.raises(ValueError):
        ConvergenceQuery(1.0, -1.0, grid=(1.0, 0.5))
    assert ConvergenceQuery(2.0, -1.0, eps=0.5, path=DETOURED).k == 3.0


def _triples():
    rng = random.Random(7)
    for _ in range(32):
        t = rng.uniform(0.2, 5.0)
        eps = rng.uniform(0.05, 1.0) * t
        phi = rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3)
        yield t, eps, phi


@pytest.mark.parametrize("t, eps, phi", list(_triples()))
def test_interval_and_condition_agree(t, eps, phi):
    q = ConvergenceQuery(t, -1.0, phi, eps=eps, path=DETOURED)
    holds = all(damping_condition(q, th)[0] for th in THETAS)
    if convergence_semi_interval(t, eps).contains(phi):
        assert holds
    if phi > detour_exact_bound(t, eps) + 1e-2:
        assert not holds
    if phi < detour_exact_bound(t, eps) - 1e-2:
        assert holds


def test_semicircle_condition_inside_interval():
    for phi in np.linspace(-math.pi / 2 + 0.01, 0.0, 9):
        q = ConvergenceQuery(1.0, -1.0, float(phi))
        assert all(damping_condition(q, th)[0] for th in THETAS)


def test_ray_limit_converges_on_positive_axis():
    r = ray_limit_check(HALF_COT, 1.0, -1.0, [0.0], 0.0)
    assert r.converges
    assert r.points[-1].absz == 800.0 and r.errors[-1] <= 1e-2
    assert r.errors[-3] > r.errors[-2] > r.errors[-1]


def test_ray_limit_diverges_outside():
    r = ray_limit_check(HALF_COT, 1.0, -1.0, [0.0], 0.6 * math.pi)
    assert r.verdict == "diverges"


def test_detour_between_bounds_converges():
    # arctan k < phi < exact bound: the interval is sufficient, not necessary
    t, eps = 1.0, 0.25
    phi = 0.5 * (math.atan(3.0) + detour_exact_bound(t, eps))
    r = ray_limit_check(HALF_COT, t, -1.0, [0.0], phi, path=DETOURED, eps=eps)
    assert r.converges
    assert not convergence_semi_interval(t, eps).contains(phi)


def test_detour_beyond_exact_bound_diverges():
    r = ray_limit_check(HALF_COT, 1.0, -1.0, [0.0], 1.4, path=DETOURED, eps=0.25)
    assert r.verdict == "diverges"


def test_left_anchor_targets_left_end():
    r = ray_limit_check("exp(t)", 1.0, -1.0, [], 0.0, anchor="left")
    assert r.converges and r.target == pytest.approx(math.exp(-1))


def test_semicircle_path():
    r = ray_limit_check("exp(t)", 1.0, -1.0, [], -0.3, path=SEMICIRCLE)
    assert r.converges


def test_ray_arguments_validated():
    with pytest.raises(ValueError):
        ray_limit_check("exp(t)", 1.0, -1.0, grid=(1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        ray_limit_check("exp(t)", 1.0, -1.0, anchor="middle")
    with pytest.raises(ValueError):
        ray_limit_check("exp(t)", 1.0, -1.0, path="spiral")


def test_report_json():
    r = ray_limit_check("exp(t)", 1.0, -1.0, [], 0.0, path=SEGMENT)
    d = json.loads(r.to_json())
    assert d["verdict"] == "converges" and len(d["grid"]) == 6
    assert Interval(0.0, 1.0).to_dict()["hi_closed"] is True
