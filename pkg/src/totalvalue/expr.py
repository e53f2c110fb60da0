"""Expression trees: parse text, print it back, evaluate at complex points.

Grammar (loosest to tightest binding)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := unary
    unary  := ("+" | "-") unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"

``^`` is right-associative and binds tighter than unary minus, so ``-t^2``
is ``-(t^2)``.  There is no implicit multiplication.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

__all__ = [
    "Expr",
    "Num",
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Call",
    "ExprError",
    "ParseError",
    "LexError",
    "ExprSyntaxError",
    "ArityError",
    "EvalError",
    "UnboundVariableError",
    "parse",
    "to_text",
    "evaluate",
    "free_variables",
    "compile_expr",
    "as_function",
    "CONSTANTS",
    "FUNCTIONS",
]


class ExprError(Exception):
    """Base class for expression errors."""


class ParseError(ExprError):
    """A parse failure at a character offset of the source."""

    def __init__(self, message: str, position: int, source: str = ""):
        self.message = message
        self.position = position
        self.source = source
        super().__init__(f"{message} at position {position}")

    def pointer(self) -> str:
        """Two-line rendering with a caret under the offending character."""
        return f"{self.source}\n{' ' * self.position}^"


class LexError(ParseError):
    pass


class ExprSyntaxError(ParseError):
    pass


class ArityError(ParseError):
    pass


class EvalError(ExprError, ArithmeticError):
    pass


class UnboundVariableError(EvalError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable {name!r}")

    def __str__(self) -> str:
        return f"unbound variable {self.name!r}"


# --------------------------------------------------------------------------
# tree

@dataclass(frozen=True)
class Expr:
    """Base node.  Nodes are immutable and hashable."""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]


CONSTANTS: dict[str, complex] = {"pi": complex(math.pi), "e": complex(math.e), "i": 1j}

FUNCTIONS: dict[str, int] = {
    "sin": 1, "cos": 1, "tan": 1, "cot": 1, "exp": 1, "log": 1,
    "sqrt": 1, "abs": 1, "re": 1, "im": 1, "conj": 1,
}


# --------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num | ident | op | end
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise LexError(f"unexpected character {source[pos]!r}", pos, source)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


# --------------------------------------------------------------------------
# parser (recursive descent, one function per grammar rule)

class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def _advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def _error(self, message: str, tok: _Token | None = None) -> ExprSyntaxError:
        tok = tok or self.tok
        return ExprSyntaxError(message, tok.pos, self.source)

    def _expect(self, text: str) -> _Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self._advance()
        found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
        raise self._error(f"expected {text!r}, found {found}")

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise self._error("empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            if self.tok.text == ")":
                raise self._error("unbalanced ')'")
            raise self._error(f"unexpected token {self.tok.text!r}")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self._advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self._advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self._advance().text
            return Unary(op, self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self._advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self._advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self._advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                return self._call(tok)
            if tok.text in FUNCTIONS:
                raise self._error(f"function {tok.text!r} needs an argument list", tok)
            if tok.text in CONSTANTS:
                return Const(tok.text)
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        if tok.kind == "end":
            raise self._error("unexpected end of input")
        raise self._error(f"unexpected token {tok.text!r}")

    def _call(self, name_tok: _Token) -> Expr:
        name = name_tok.text
        if name not in FUNCTIONS:
            raise self._error(f"unknown function {name!r}", name_tok)
        self._expect("(")
        args = [self.expr()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self._advance()
            args.append(self.expr())
        self._expect(")")
        if len(args) != FUNCTIONS[name]:
            raise ArityError(
                f"{name} takes {FUNCTIONS[name]} argument(s), got {len(args)}",
                name_tok.pos,
                self.source,
            )
        return Call(name, tuple(args))


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    >>> to_text(parse("1/(z-1)^3"))
    '1/(z-1)^3'
    """
    if not isinstance(source, str):
        raise TypeError("source must be a string")
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _prec(node: Expr) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary):
        return _PREC["neg"]
    return 5


def _fmt_num(x: float) -> str:
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def to_text(node: Expr) -> str:
    """Render with the minimum parentheses needed to re-parse to the same tree."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, (Const, Var)):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Unary):
        inner = to_text(node.operand)
        # operand of unary minus is itself `unary`, i.e. anything at power level or tighter
        if _prec(node.operand) < _PREC["neg"]:
            inner = f"({inner})"
        return f"{node.op}{inner}"
    if isinstance(node, Binary):
        p = _PREC[node.op]
        left, right = to_text(node.left), to_text(node.right)
        if node.op == "^":
            # base is an atom; exponent is a unary
            if _prec(node.left) <= p:
                left = f"({left})"
            if _prec(node.right) < _PREC["neg"]:
                right = f"({right})"
            return f"{left}^{right}"
        if _prec(node.left) < p:
            left = f"({left})"
        # left-associative: an equal-precedence right child needs parentheses
        if _prec(node.right) <= p or isinstance(node.right, Unary):
            right = f"({right})"
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an expression node: {node!r}")


def free_variables(node: Expr) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Unary):
        return free_variables(node.operand)
    if isinstance(node, Binary):
        return free_variables(node.left) | free_variables(node.right)
    if isinstance(node, Call):
        out: set[str] = set()
        for a in node.args:
            out |= free_variables(a)
        return out
    return set()


# --------------------------------------------------------------------------
# scalar evaluation

def _cot(z: complex) -> complex:
    s = cmath.sin(z)
    if s == 0:
        raise EvalError("division by exact zero in cot")
    return cmath.cos(z) / s


def _log(z: complex) -> complex:
    if z == 0:
        raise EvalError("log of exact zero")
    return cmath.log(z)


_SCALAR_FUNCS: dict[str, Callable[[complex], complex]] = {
    "sin": cmath.sin,
    "cos": cmath.cos,
    "tan": cmath.tan,
    "cot": _cot,
    "exp": cmath.exp,
    "log": _log,
    "sqrt": cmath.sqrt,
    "abs": lambda z: complex(abs(z)),
    "re": lambda z: complex(z.real),
    "im": lambda z: complex(z.imag),
    "conj": lambda z: z.conjugate(),
}


def _int_exponent(node: Expr) -> int | None:
    if isinstance(node, Num) and node.value.is_integer() and abs(node.value) <= 64:
        return int(node.value)
    if isinstance(node, Unary) and isinstance(node.operand, Num):
        k = _int_exponent(node.operand)
        if k is not None:
            return -k if node.op == "-" else k
    return None


def evaluate(node: Expr | str, bindings: Mapping[str, complex] | None = None, **kw: complex) -> complex:
    """Evaluate at complex arguments, e.g. ``evaluate("1/(1-cos(t))", t=math.pi)``."""
    if isinstance(node, str):
        node = parse(node)
    env = dict(bindings or {})
    env.update(kw)
    return _eval(node, env)


def _eval(node: Expr, env: Mapping[str, complex]) -> complex:
    if isinstance(node, Num):
        return complex(node.value)
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Var):
        try:
            return complex(env[node.name])
        except KeyError:
            raise UnboundVariableError(node.name) from None
    if isinstance(node, Unary):
        v = _eval(node.operand, env)
        return -v if node.op == "-" else v
    if isinstance(node, Binary):
        a = _eval(node.left, env)
        if node.op == "^":
            k = _int_exponent(node.right)
            if k is not None:
                if a == 0 and k < 0:
                    raise EvalError("division by exact zero in power")
                return a**k
            b = _eval(node.right, env)
            if b.imag == 0 and b.real.is_integer() and abs(b.real) <= 2**53:
                if a == 0 and b.real < 0:
                    raise EvalError("division by exact zero in power")
                return a ** int(b.real)
            try:
                return a**b
            except ZeroDivisionError:
                raise EvalError("division by exact zero in power") from None
        b = _eval(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            raise EvalError("division by exact zero")
        return a / b
    if isinstance(node, Call):
        return _SCALAR_FUNCS[node.name](_eval(node.args[0], env))
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# vectorised evaluation for quadrature

ArrayFn = Callable[[np.ndarray], np.ndarray]

_NP_FUNCS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "cot": lambda z: np.cos(z) / np.sin(z),
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": lambda z: np.abs(z).astype(complex),
    "re": lambda z: np.real(z).astype(complex),
    "im": lambda z: np.imag(z).astype(complex),
    "conj": np.conj,
}


def _ipow(z: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        return 1.0 / _ipow(z, -k)
    out = np.ones_like(z)
    base = z
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


def _pow(b: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Complex power that stays exact for real bases raised to integer exponents."""
    out = np.power(b, e)
    exact = (e.imag == 0) & (e.real == np.round(e.real)) & (b.imag == 0)
    if np.any(exact):
        out = np.asarray(out).copy()
        out[exact] = np.power(b.real[exact], e.real[exact])
    return out


def _build(node: Expr, var: str, env: Mapping[str, complex]) -> ArrayFn:
    if isinstance(node, Num):
        c = complex(node.value)
        return lambda z: np.full_like(z, c)
    if isinstance(node, Const):
        c = CONSTANTS[node.name]
        return lambda z: np.full_like(z, c)
    if isinstance(node, Var):
        if node.name == var:
            return lambda z: z
        if node.name not in env:
            raise UnboundVariableError(node.name)
        c = complex(env[node.name])
        return lambda z: np.full_like(z, c)
    if isinstance(node, Unary):
        f = _build(node.operand, var, env)
        return (lambda z: -f(z)) if node.op == "-" else f
    if isinstance(node, Binary):
        f = _build(node.left, var, env)
        if node.op == "^":
            k = _int_exponent(node.right)
            if k is not None:
                return lambda z: _ipow(f(z), k)
        g = _build(node.right, var, env)
        op = node.op
        if op == "+":
            return lambda z: f(z) + g(z)
        if op == "-":
            return lambda z: f(z) - g(z)
        if op == "*":
            return lambda z: f(z) * g(z)
        if op == "/":
            return lambda z: f(z) / g(z)
        return lambda z: _pow(np.broadcast_to(f(z), np.shape(z)), np.broadcast_to(g(z), np.shape(z)))
    if isinstance(node, Call):
        f = _build(node.args[0], var, env)
        fn = _NP_FUNCS[node.name]
        return lambda z: fn(f(z))
    raise TypeError(f"not an expression node: {node!r}")


def compile_expr(node: Expr | str, variable: str = "t", bindings: Mapping[str, complex] | None = None) -> ArrayFn:
    """Compile to a function of one complex numpy array.

    Division by zero yields inf/nan rather than raising; callers that integrate
    check finiteness.  Every free name other than ``variable`` must be bound.
    """
    if isinstance(node, str):
        node = parse(node)
    fn = _build(node, variable, bindings or {})

    def call(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            return fn(z)

    call.expr = node  # type: ignore[attr-defined]
    call.variable = variable  # type: ignore[attr-defined]
    return call


FunctionLike = Union[Expr, str, Callable]


def as_function(f: FunctionLike, variable: str | None = None, bindings: Mapping[str, complex] | None = None) -> ArrayFn:
    """Normalise text, a tree or a vectorised callable to an array function.

    With ``variable=None`` a tree's single free variable is used (``t`` if it has none).
    """
    if isinstance(f, str):
        f = parse(f)
    if isinstance(f, Expr):
        if variable is None:
            names = free_variables(f) - set(bindings or {})
            if len(names) > 1:
                raise ExprError(f"ambiguous integration variable among {sorted(names)}")
            variable = names.pop() if names else "t"
        return compile_expr(f, variable, bindings)
    if callable(f):
        return f
    raise TypeError(f"cannot use {type(f).__name__} as a function")
