from __future__ import annotations

import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln, zeta

from totalvalue.summation import (
    CONVERGED,
    DIVERGENT,
    OSCILLATORY,
    SUMMABLE,
    SummationError,
    SummationResult,
    abel_sum,
    cauchy_limit,
    cesaro_sum,
    term_array,
    wynn_epsilon,
)

_W = cmath.exp(1j) / 2

# convergent series with closed-form sums
CONVERGENT = [
    ("inv_square", lambda k: 1 / k**2, math.pi**2 / 6),
    ("alt_harmonic", lambda k: (-1.0) ** (k + 1) / k, math.log(2)),
    ("half_powers", lambda k: 0.5**k, 1.0),
    ("leibniz", lambda k: (-1.0) ** (k + 1) / (2 * k - 1), math.pi / 4),
    ("telescoping", lambda k: 1 / (k * (k + 1)), 1.0),
    ("inv_cube", lambda k: 1 / k**3, zeta(3)),
    ("alt_inv_square", lambda k: (-1.0) ** (k + 1) / k**2, math.pi**2 / 12),
    ("inv_factorial", lambda k: np.exp(-gammaln(k + 1)), math.e - 1),
    ("third_powers", lambda k: 3.0**-k, 0.5),
    ("k_half_powers", lambda k: k * 0.5**k, 2.0),
    ("inv_fourth", lambda k: 1 / k**4, math.pi**4 / 90),
    ("alt_shifted", lambda k: (-1.0) ** k / (k + 1), math.log(2) - 1),
    ("sin_over_k", lambda k: np.sin(k) / k, (math.pi - 1) / 2),
    ("cos_over_k2", lambda k: np.cos(k) / k**2, math.pi**2 / 6 - math.pi / 2 + 0.25),
    ("odd_telescoping", lambda k: 1 / (4 * k**2 - 1), 0.5),
    ("alt_inv_cube", lambda k: (-1.0) ** (k + 1) / k**3, 0.75 * zeta(3)),
    ("two_pow_over_fact", lambda k: np.exp(k * math.log(2) - gammaln(k + 1)), math.e**2 - 1),
    ("k2_half_powers", lambda k: k**2 * 0.5**k, 6.0),
    ("log_two", lambda k: 0.5**k / k, math.log(2)),
    ("cos_half_powers", lambda k: np.cos(k) * 0.5**k, (_W / (1 - _W)).real),
]


@pytest.mark.parametrize("name, terms, want", CONVERGENT, ids=[c[0] for c in CONVERGENT])
def test_abel_agrees_with_ordinary_sum(name, terms, want):
    r = abel_sum(terms)
    assert r.status in (CONVERGED, SUMMABLE)
    assert abs(r.value - want) <= 1e-9
    c = cesaro_sum(terms, 1)
    assert c.has_value and abs(c.value - want) <= 1e-4


def test_grandi_series():
    r = abel_sum(lambda k: (-1.0) ** k)
    assert r.status == SUMMABLE and abs(r.value + 0.5) <= 1e-9
    c1, c2 = cesaro_sum(lambda k: (-1.0) ** k, 1), cesaro_sum(lambda k: (-1.0) ** k, 2)
    assert abs(c1.value + 0.5) <= 1e-6 and abs(c2.value + 0.5) <= 1e-6
    assert abs(c1.value - c2.value) <= 1e-6
    assert cauchy_limit(lambda k: (-1.0) ** k).status == OSCILLATORY


def test_alternating_integers():
    r = abel_sum(lambda k: k * (-1.0) ** k)
    assert abs(r.value + 0.25) <= 1e-9
    assert cesaro_sum(lambda k: k * (-1.0) ** k, 1).status == OSCILLATORY
    c2 = cesaro_sum(lambda k: k * (-1.0) ** k, 2)
    assert abs(c2.value + 0.25) <= 1e-6


def test_alternating_cubes():
    assert abs(abel_sum(lambda k: k**3 * (-1.0) ** k).value - 0.125) <= 1e-7


@pytest.mark.parametrize("terms", [lambda k: k, lambda k: 1 / k, lambda k: np.ones_like(k)])
def test_abel_detects_divergence(terms):
    r = abel_sum(terms)
    assert r.status == DIVERGENT and r.value is None
    assert "reason" in r.diagnostics


def test_cauchy_detects_divergence():
    assert cauchy_limit(lambda k: 1 / k).status == DIVERGENT
    assert cauchy_limit(lambda k: k).status == DIVERGENT


def test_cauchy_limit_of_fast_series():
    r = cauchy_limit(lambda k: 0.5**k)
    assert r.status == CONVERGED and abs(r.value - 1) < 1e-12


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.0])
def test_abel_sine_series(t):
    r = abel_sum(lambda k: np.sin(k * t))
    assert abs(r.value - 0.5 / math.tan(t / 2)) <= 1e-6


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.0])
def test_abel_k_cosine_series(t):
    r = abel_sum(lambda k: k * np.cos(k * t))
    assert abs(r.value + 1 / (2 * (1 - math.cos(t)))) <= 1e-5


@settings(max_examples=15)
@given(c=st.floats(-10, 10).filter(lambda c: abs(c) > 1e-3))
def test_abel_is_linear(c):
    base = abel_sum(lambda k: (-1.0) ** k).value
    scaled = abel_sum(lambda k: c * (-1.0) ** k).value
    assert abs(scaled - c * base) <= 1e-9 * (1 + abs(c))


def test_cesaro_first_order_matches_abel_on_oscillating_series():
    for t in (0.5, 2.0):
        c = cesaro_sum(lambda k: np.cos(k * t), 1)
        a = abel_sum(lambda k: np.cos(k * t))
        assert abs(c.value - a.value) <= 1e-5
        assert abs(a.value + 0.5) <= 1e-9


def test_cesaro_order_validated():
    with pytest.raises(ValueError):
        cesaro_sum(lambda k: k, 0)


def test_wynn_accelerates_log_two():
    s = np.cumsum([(-1.0) ** (k + 1) / k for k in range(1, 30)])
    r = wynn_epsilon(s)
    assert abs(r.value - math.log(2)) < 1e-13
    with pytest.raises(SummationError):
        wynn_epsilon([1, 2, 3])


def test_wynn_exact_on_geometric():
    s = np.cumsum([0.3**k for k in range(10)])
    assert abs(wynn_epsilon(s).value - 1 / 0.7) < 1e-13


@pytest.mark.parametrize("t", [0.5, 1.0, 2.5])
def test_wynn_on_alternating_sine_series(t):
    k = np.arange(1, 41)
    s = np.cumsum((-1.0) ** k * np.sin(k * t) / k)
    assert abs(wynn_epsilon(s).value + t / 2) <= 1e-6


def test_finite_sequence_abel_uses_partial_sums():
    r = abel_sum((-1.0) ** np.arange(1, 41))
    assert abs(r.value + 0.5) <= 1e-9


def test_term_array_float_indices_avoid_overflow():
    a = term_array(lambda k: 1 / k**4, 4, start=100000)
    assert np.all(a.real > 0)


def test_non_finite_terms_rejected():
    with pytest.raises(SummationError):
        abel_sum(lambda k: np.where(k == 5, np.inf, 1.0))


def test_result_consistency_and_json():
    with pytest.raises(ValueError):
        SummationResult("abel", DIVERGENT, 1.0, 0.0)
    d = json.loads(abel_sum(lambda k: (-1.0) ** k).to_json())
    assert d["method"] == "abel" and d["status"] == SUMMABLE
    assert abs(d["value"]["re"] + 0.5) < 1e-9
