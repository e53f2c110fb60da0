from __future__ import annotations

import json
import math

import numpy as np
import pytest

from totalvalue.contour import LOWER, UPPER, ContourError
from totalvalue.fourier import (
    FourierError,
    SeriesCoefficients,
    fourier_coefficients,
    parse_method,
    series_partial_sum,
    series_value,
)

HALF_COT = "sin(t)/(2*(1-cos(t)))"
INV_2_1MCOS = "1/(2*(1-cos(t)))"


@pytest.fixture(scope="module")
def example1():
    return fourier_coefficients(HALF_COT, [(0.0, LOWER)], 20)


@pytest.fixture(scope="module")
def example2():
    return fourier_coefficients(INV_2_1MCOS, [(0.0, LOWER)], 20)


def test_half_cot_coefficients(example1):
    assert abs(example1.a0_half + 0.5j) <= 1e-7
    for A, B in zip(example1.A, example1.B):
        assert abs(B - 1) <= 1e-7
        assert abs(A.imag + 1) <= 1e-7
        assert abs(A.real) <= 1e-7


def test_double_pole_coefficients(example2):
    assert abs(example2.a0_half) <= 1e-6
    for k, (A, B) in enumerate(zip(example2.A, example2.B), start=1):
        assert abs(A + k) <= 1e-6 * k
        assert abs(B + 1j * k) <= 1e-6 * k


def test_coefficient_differences(example2):
    for a, b in zip(example2.A, example2.A[1:]):
        assert abs((a - b) - 1) <= 1e-6


def test_side_flips_sine_coefficients_only():
    up = fourier_coefficients(INV_2_1MCOS, [(0.0, UPPER)], 5)
    lo = fourier_coefficients(INV_2_1MCOS, [(0.0, LOWER)], 5)
    for k in range(5):
        assert abs(up.B[k] + lo.B[k]) <= 1e-8
        assert abs(up.A[k] - lo.A[k]) <= 1e-8


def test_removable_products_drop_the_pole(example1):
    # sin(k t) cancels the simple pole, so B_k needs no detour
    assert all(o[1] == 0 for o in example1.orders[1:])


def test_sawtooth_classical_coefficients():
    c = fourier_coefficients("t", [], 30)
    for k, (A, B) in enumerate(zip(c.A, c.B), start=1):
        assert abs(A) <= 1e-12
        assert abs(B - 2 * (-1) ** (k + 1) / k) <= 1e-12
    assert c.realness_defect <= 1e-12


def test_square_wave_with_break():
    def sq(z):
        return np.where(np.real(z) > 0, 1.0, -1.0) + 0j

    c = fourier_coefficients(sq, [], 15, breaks=[0.0])
    for k, B in enumerate(c.B, start=1):
        want = 4 / (math.pi * k) if k % 2 else 0.0
        assert abs(B - want) <= 1e-12
    mid = series_value(c, 0.0, breaks=[0.0], one_sided_limits=(-1.0, 1.0))
    assert mid.value == 0


def test_break_at_pole_rejected():
    with pytest.raises(ContourError):
        fourier_coefficients(HALF_COT, [0.0], 3, breaks=[0.0])


def test_pole_at_endpoint_rejected():
    with pytest.raises(ContourError):
        fourier_coefficients("1/(t-pi)", [math.pi], 3)


def test_partial_sums_of_sawtooth():
    c = fourier_coefficients("t", [], 60)
    assert series_partial_sum(c, 1.0, 0) == c.a0_half
    k = np.arange(1, 61)
    want = np.sum(2 * (-1.0) ** (k + 1) / k * np.sin(k))
    assert abs(series_partial_sum(c, 1.0) - want) <= 1e-12
    assert abs(series_partial_sum(c, 1.0).real - 1.0) <= 0.05
    with pytest.raises(ValueError):
        series_partial_sum(c, 1.0, 61)


def test_endpoint_value_is_midpoint():
    c = fourier_coefficients("t", [], 10)
    assert abs(series_value(c, math.pi).value) <= 1e-15
    assert abs(series_value(c, -math.pi).value) <= 1e-15


@pytest.mark.parametrize("method", ["abel", "cesaro:1"])
def test_sawtooth_series_value(method):
    c = fourier_coefficients("t", [], 64)
    r = series_value(c, 1.0, method)
    assert abs(r.value - 1.0) <= (1e-9 if method == "abel" else 0.05)


def test_half_cot_series_at_quarter_turn(example1):
    # sum of the B_k sin(k t) part only: 1/2 cot(t/2)
    t = math.pi / 2
    c = SeriesCoefficients(0j, tuple(0j for _ in example1.A), example1.B, 2 * math.pi, -math.pi, math.pi)
    r = series_value(c, t, "abel")
    assert abs(r.value - 0.5 / math.tan(t / 2)) <= 1e-6


def test_linearity():
    a = fourier_coefficients("t^2", [], 8)
    b = fourier_coefficients("cos(t)", [], 8)
    ab = fourier_coefficients("3*t^2 - 2*cos(t)", [], 8)
    for x, y, z in zip(a.A, b.A, ab.A):
        assert abs(3 * x - 2 * y - z) <= 1e-11
    assert abs(3 * a.a0_half - 2 * b.a0_half - ab.a0_half) <= 1e-11


def test_scaled():
    a = fourier_coefficients("t", [], 4)
    s = a.scaled(2j)
    assert s.B[0] == 2j * a.B[0]


def test_custom_interval_and_period():
    c = fourier_coefficients("t", [], 5, 0.0, 1.0)
    assert c.period == 1.0
    for k, B in enumerate(c.B, start=1):
        assert abs(B + 1 / (math.pi * k)) <= 1e-12


def test_parse_method():
    assert parse_method("abel") == ("abel", 1)
    assert parse_method("partial") == ("cauchy", 1)
    assert parse_method("cesaro:2") == ("cesaro", 2)
    with pytest.raises(ValueError):
        parse_method("borel")


def test_invalid_arguments():
    with pytest.raises(ValueError):
        fourier_coefficients("t", [], 0)
    with pytest.raises(ValueError):
        fourier_coefficients("t", [], 3, 1.0, 0.0)


def test_non_existent_total_value_raises():
    # 1/|t| is not meromorphic: the excision and the arc together still grow like log(1/eps)
    with pytest.raises(FourierError):
        fourier_coefficients("1/abs(t)", [0.0], 1)


def test_json_shape(example1):
    d = json.loads(example1.to_json())
    assert d["k_max"] == 20 and len(d["A"]) == 20 and d["poles"][0]["order"] == 1
