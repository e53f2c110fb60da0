from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from totalvalue.contour import (
    LOWER,
    UPPER,
    Arc,
    Contour,
    ContourError,
    QuadratureError,
    Segment,
    build_detoured_segment,
    detour_arc,
    path_integral,
    side_sign,
)


def _circle(center=0j, r=1.0):
    return Contour([Arc(complex(center), r, 0.0, 2 * math.pi)])


def test_unit_circle_of_reciprocal():
    r = path_integral("1/z", _circle(), "z")
    assert abs(r.value - 2j * math.pi) < 1e-12


def test_segment_of_square():
    r = path_integral("t^2", Segment(0.0, 1.0))
    assert abs(r.value - 1 / 3) < 1e-14
    assert r.warning is None


def test_arc_over_pole_matches_log_oracle():
    # arc over the top from 1 to -1 of 1/z; log difference along the upper half plane
    arc = detour_arc(0.0, UPPER, 1.0)
    assert arc.theta0 == -math.pi
    over = Arc(0j, 1.0, 0.0, math.pi)
    r = path_integral("1/z", over, "z")
    assert abs(r.value - (cmath.log(-1) - cmath.log(1))) < 1e-13


def test_detour_sides_give_plus_minus_i_pi():
    lower = path_integral("1/z", detour_arc(0.0, LOWER, 0.1), "z").value
    upper = path_integral("1/z", detour_arc(0.0, UPPER, 0.1), "z").value
    assert abs(lower + 1j * math.pi) < 1e-12
    assert abs(upper - 1j * math.pi) < 1e-12
    assert side_sign(LOWER) == -1 and side_sign(UPPER) == 1


def test_side_name_validated():
    with pytest.raises(ContourError):
        side_sign("left")


@pytest.mark.parametrize("center, r", [(0j, 1.0), (0.3 + 0.2j, 2.5), (-4j, 0.25)])
@pytest.mark.parametrize("src", ["exp(z)", "z^5 - 3*z", "sin(z)*cos(2*z)", "1/(z - 20)"])
def test_closed_contour_of_analytic_vanishes(src, center, r, quiet):
    val = path_integral(src, _circle(center, r), "z").value
    assert abs(val) <= 1e-10


def test_closed_polygon_of_analytic_vanishes():
    c = Contour([Segment(-1.0, 1.0), Arc(0j, 1.0, 0.0, math.pi)])
    assert c.closed
    assert abs(path_integral("exp(z)*z^2", c, "z").value) <= 1e-10


@given(
    a=st.floats(-5, 5),
    m=st.floats(-5, 5),
    b=st.floats(-5, 5),
)
def test_segment_additivity(a, m, b):
    f = "exp(t/3)*cos(t)"
    whole = path_integral(f, Segment(a, b)).value
    parts = path_integral(f, Contour([Segment(a, m), Segment(m, b)])).value
    assert abs(whole - parts) <= 1e-10


@given(a=st.floats(-5, 5), b=st.floats(-5, 5))
def test_segment_reversal(a, b):
    f = "sin(t)^2 + i*t"
    fwd = path_integral(f, Segment(a, b)).value
    back = path_integral(f, Segment(b, a)).value
    assert abs(fwd + back) <= 1e-11


@given(t0=st.floats(-3, 3), t1=st.floats(-3, 3))
def test_arc_reversal(t0, t1):
    arc = Arc(0.5 + 0.5j, 1.5, t0, t1)
    fwd = path_integral("z^2*exp(-z)", arc, "z").value
    back = path_integral("z^2*exp(-z)", arc.reversed(), "z").value
    assert abs(fwd + back) <= 1e-11


def test_contour_reversal_and_concatenation():
    c = build_detoured_segment(-1.0, 2.0, [(0.5, LOWER)], 0.2)
    f = "exp(z)/(z-0.5)"
    assert abs(path_integral(f, c, "z").value + path_integral(f, c.reversed(), "z").value) < 1e-11
    joined = Contour([Segment(-3.0, -1.0)]) + c
    assert len(joined) == len(c) + 1


def test_build_detoured_segment_pieces():
    c = build_detoured_segment(-math.pi, math.pi, [(0.0, LOWER), (1.0, UPPER)], 0.1)
    assert len(c) == 5
    assert [type(p).__name__ for p in c] == ["Segment", "Arc", "Segment", "Arc", "Segment"]
    assert c.start == -math.pi and c.end == math.pi
    assert c[1].theta0 == math.pi and c[3].theta0 == -math.pi


@pytest.mark.parametrize(
    "a, b, poles, eps",
    [
        (-1.0, 1.0, [(1.0, LOWER)], 0.1),
        (-1.0, 1.0, [(0.95, LOWER)], 0.1),
        (-1.0, 1.0, [(0.0, LOWER), (0.15, LOWER)], 0.1),
        (1.0, -1.0, [], 0.1),
        (-1.0, 1.0, [(0.0, LOWER)], 0.0),
        (-1.0, 1.0, [(0.0, "sideways")], 0.1),
    ],
)
def test_build_detoured_segment_rejects(a, b, poles, eps):
    with pytest.raises(ContourError):
        build_detoured_segment(a, b, poles, eps)


def test_disconnected_contour_rejected():
    with pytest.raises(ContourError):
        Contour([Segment(0.0, 1.0), Segment(1.5, 2.0)])


def test_contour_json_round_trip():
    c = build_detoured_segment(-2.0, 3.0, [(0.0, LOWER), (1.0, UPPER)], 0.25)
    assert Contour.from_json(c.to_json()) == c


def test_non_finite_integrand_raises():
    with pytest.raises(QuadratureError):
        path_integral("1/t", Segment(-1.0, 1.0))


def test_vectorised_callable_accepted():
    r = path_integral(lambda z: np.exp(z), Segment(0.0, 1.0))
    assert abs(r.value - (math.e - 1)) < 1e-14
