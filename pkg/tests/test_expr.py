from __future__ import annotations

import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from totalvalue.expr import (
    ArityError,
    Binary,
    Call,
    Const,
    EvalError,
    ExprSyntaxError,
    LexError,
    Num,
    ParseError,
    Unary,
    UnboundVariableError,
    Var,
    compile_expr,
    evaluate,
    free_variables,
    parse,
    to_text,
)

FUNCS = ("sin", "cos", "tan", "cot", "exp", "log", "sqrt", "abs", "re", "im", "conj")


def test_parse_quotient_shape():
    node = parse("sin(t)/(2*(1-cos(t)))")
    assert node == Binary(
        "/",
        Call("sin", (Var("t"),)),
        Binary("*", Num(2.0), Binary("-", Num(1.0), Call("cos", (Var("t"),)))),
    )


def test_power_binds_tighter_than_division():
    assert parse("1/(z-1)^3") == Binary("/", Num(1.0), Binary("^", Binary("-", Var("z"), Num(1.0)), Num(3.0)))


def test_unary_minus_looser_than_power():
    assert parse("-t^2") == Unary("-", Binary("^", Var("t"), Num(2.0)))


def test_power_right_associative():
    assert parse("2^3^2") == Binary("^", Num(2.0), Binary("^", Num(3.0), Num(2.0)))
    assert evaluate("2^3^2") == 512


def test_subtraction_left_associative():
    assert evaluate("10-4-3") == 3


def test_constants_and_whitespace():
    assert parse(" pi * e ") == Binary("*", Const("pi"), Const("e"))
    assert abs(evaluate("exp(i*pi)") - (-1)) < 1e-15


@pytest.mark.parametrize(
    "source, exc",
    [("2t", ExprSyntaxError), ("sin(1,2)", ArityError), ("t $ 2", LexError), ("(t", ExprSyntaxError), ("", ParseError),
     ("t)", ExprSyntaxError), ("sin", ExprSyntaxError)],
)
def test_parse_errors(source, exc):
    with pytest.raises(exc) as info:
        parse(source)
    assert info.value.position >= 0


def test_error_position_points_at_offender():
    with pytest.raises(LexError) as info:
        parse("t + $")
    assert info.value.position == 4


def test_eval_examples():
    assert abs(evaluate("sin(t)/(2*(1-cos(t)))", t=math.pi)) < 1e-16
    assert evaluate("1/(1-cos(t))", t=math.pi) == pytest.approx(0.5)


def test_unbound_variable_is_error():
    with pytest.raises(UnboundVariableError):
        evaluate("t + s", t=1)


def test_division_by_exact_zero():
    with pytest.raises(EvalError):
        evaluate("1/(t-1)", t=1)


def test_log_of_zero_is_error():
    with pytest.raises(EvalError):
        evaluate("log(t)", t=0)


def test_integer_power_of_negative_base_is_real():
    assert evaluate("(-1)^k", k=3) == -1
    assert evaluate("(-1)^k", k=3).imag == 0
    f = compile_expr("(-1)^k", "k")
    assert np.array_equal(f(np.arange(4)), np.array([1, -1, 1, -1], dtype=complex))


def test_free_variables():
    assert free_variables(parse("sin(t)*x + pi")) == {"t", "x"}


def test_compile_matches_scalar_eval():
    src = "cot(z/2)/2 + sqrt(z)*log(z) - abs(z)^2 + conj(z)*re(z) - im(z)"
    f = compile_expr(src, "z")
    rng = np.random.default_rng(3)
    z = rng.normal(size=50) + 1j * rng.normal(size=50)
    got = f(z)
    want = np.array([evaluate(src, z=complex(v)) for v in z])
    assert np.allclose(got, want, rtol=1e-13, atol=1e-13)


def test_eval_is_deterministic():
    f = compile_expr("sin(t)/(2*(1-cos(t)))")
    z = np.linspace(0.1, 3, 17) + 0.2j
    assert np.array_equal(f(z), f(z))


REFERENCES = [
    ("cot(z)", lambda z: cmath.cos(z) / cmath.sin(z)),
    ("sin(z)/(2*(1-cos(z)))", lambda z: 0.5 / cmath.tan(z / 2)),
    ("1/(2*(1-cos(z)))", lambda z: 1 / (4 * cmath.sin(z / 2) ** 2)),
    ("2*sin(z/2)*cos(z/2)", cmath.sin),
    ("(1-cos(z))/sin(z)", lambda z: cmath.tan(z / 2)),
    ("exp(i*z)", lambda z: cmath.cos(z) + 1j * cmath.sin(z)),
]


@pytest.mark.parametrize("src, ref", REFERENCES)
def test_eval_against_closed_forms(src, ref):
    rng = random.Random(11)
    f = compile_expr(src, "z")
    pts = []
    while len(pts) < 1000:
        z = complex(rng.uniform(-10, 10), rng.uniform(-3, 3))
        if abs(z) <= 10 and min(abs(z - 2 * math.pi * k) for k in range(-2, 3)) > 0.1 and min(
            abs(z - math.pi * k) for k in range(-4, 5)
        ) > 0.1:
            pts.append(z)
    got = f(np.array(pts))
    want = np.array([ref(z) for z in pts])
    assert np.all(np.abs(got - want) <= 1e-12 * (1 + np.abs(want)))


# -- round trip ------------------------------------------------------------


def _tree(depth: int, rng: random.Random):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.4:
            return Var(rng.choice("tzx"))
        if r < 0.6:
            return Const(rng.choice(("pi", "e", "i")))
        return Num(rng.choice((0.0, 1.0, 2.0, 0.5, 3.25, 1e-3, 12345.0, 1e20)))
    r = rng.random()
    if r < 0.15:
        return Unary(rng.choice("+-"), _tree(depth - 1, rng))
    if r < 0.35:
        return Call(rng.choice(FUNCS), (_tree(depth - 1, rng),))
    return Binary(rng.choice("+-*/^"), _tree(depth - 1, rng), _tree(depth - 1, rng))


CORPUS = [_tree(4, random.Random(seed)) for seed in range(200)]


def test_round_trip_corpus():
    assert len({to_text(t) for t in CORPUS}) > 150
    for tree in CORPUS:
        text = to_text(tree)
        assert parse(text) == tree, text


def test_round_trip_corpus_of_text():
    for tree in CORPUS:
        s = to_text(tree)
        assert parse(to_text(parse(s))) == parse(s)


leaf = st.one_of(
    st.sampled_from([Var("t"), Var("z"), Const("pi"), Const("i")]),
    st.floats(min_value=0, max_value=1e6, allow_nan=False).map(Num),
)
trees = st.recursive(
    leaf,
    lambda kids: st.one_of(
        st.tuples(st.sampled_from("+-"), kids).map(lambda a: Unary(*a)),
        st.tuples(st.sampled_from(FUNCS), kids).map(lambda a: Call(a[0], (a[1],))),
        st.tuples(st.sampled_from("+-*/^"), kids, kids).map(lambda a: Binary(*a)),
    ),
    max_leaves=12,
)


@given(trees)
def test_round_trip_property(tree):
    assert parse(to_text(tree)) == tree
