"""Integration paths and adaptive Gauss-Kronrod quadrature along them.

A :class:`Contour` is an ordered chain of :class:`Segment` (real interval,
parameterised by the real coordinate) and :class:`Arc` (circle piece,
parameterised by angle) pieces.  :func:`path_integral` sums
``f(zeta(s)) * zeta'(s) ds`` over every piece with a vectorised, globally
adaptive G10/K21 rule.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .expr import FunctionLike, as_function

__all__ = [
    "Segment",
    "Arc",
    "Contour",
    "ContourError",
    "QuadratureError",
    "AccuracyWarning",
    "IntegralResult",
    "LOWER",
    "UPPER",
    "SIDES",
    "side_sign",
    "detour_arc",
    "build_detoured_segment",
    "path_integral",
]

CONNECT_TOL = 1e-12
MAX_PANELS = 2**16

LOWER = "lower"
UPPER = "upper"
SIDES = (LOWER, UPPER)


class ContourError(ValueError):
    pass


class QuadratureError(ArithmeticError):
    pass


class AccuracyWarning(UserWarning):
    """Requested accuracy was not reached or a cross-check disagreed."""


def side_sign(side: str) -> int:
    """-1 for ``lower``, +1 for ``upper``.

    A simple pole with residue ``A`` bypassed on side ``s`` contributes
    ``side_sign(s) * i*pi*A`` to a segment's total value.
    """
    if side == LOWER:
        return -1
    if side == UPPER:
        return 1
    raise ContourError(f"side must be 'lower' or 'upper', not {side!r}")


@dataclass(frozen=True)
class Segment:
    a: float
    b: float

    def __post_init__(self):
        for v in (self.a, self.b):
            if not math.isfinite(v):
                raise ContourError("segment endpoints must be finite")

    @property
    def start(self) -> complex:
        return complex(self.a)

    @property
    def end(self) -> complex:
        return complex(self.b)

    @property
    def bounds(self) -> tuple[float, float]:
        return self.a, self.b

    def point(self, s: np.ndarray) -> np.ndarray:
        return s.astype(complex)

    def derivative(self, s: np.ndarray) -> np.ndarray:
        return np.ones_like(s, dtype=complex)

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def to_dict(self) -> dict:
        return {"kind": "segment", "a": float(self.a), "b": float(self.b)}


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ContourError("arc radius must be positive")
        if abs(self.theta1 - self.theta0) > 2 * math.pi + 1e-12:
            raise ContourError("arc may not sweep more than a full turn")

    @property
    def start(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.theta0), math.sin(self.theta0))

    @property
    def end(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.theta1), math.sin(self.theta1))

    @property
    def bounds(self) -> tuple[float, float]:
        return self.theta0, self.theta1

    def point(self, s: np.ndarray) -> np.ndarray:
        return self.center + self.radius * np.exp(1j * s)

    def derivative(self, s: np.ndarray) -> np.ndarray:
        return 1j * self.radius * np.exp(1j * s)

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.theta1, self.theta0)

    def to_dict(self) -> dict:
        c = complex(self.center)
        return {
            "kind": "arc",
            "center": {"re": c.real, "im": c.imag},
            "radius": float(self.radius),
            "theta0": float(self.theta0),
            "theta1": float(self.theta1),
        }


PathPiece = Union[Segment, Arc]


def _piece_from_dict(d: Mapping) -> PathPiece:
    if d["kind"] == "segment":
        return Segment(float(d["a"]), float(d["b"]))
    if d["kind"] == "arc":
        c = d["center"]
        return Arc(complex(c["re"], c["im"]), float(d["radius"]), float(d["theta0"]), float(d["theta1"]))
    raise ContourError(f"unknown piece kind {d['kind']!r}")


class Contour:
    """Immutable chain of connected path pieces."""

    __slots__ = ("_pieces",)

    def __init__(self, pieces: Iterable[PathPiece]):
        pieces = tuple(pieces)
        if not pieces:
            raise ContourError("a contour needs at least one piece")
        for j, (p, q) in enumerate(zip(pieces, pieces[1:])):
            if abs(p.end - q.start) > CONNECT_TOL:
                raise ContourError(f"pieces {j} and {j + 1} are not connected")
        self._pieces = pieces

    @property
    def pieces(self) -> tuple[PathPiece, ...]:
        return self._pieces

    def __len__(self) -> int:
        return len(self._pieces)

    def __iter__(self):
        return iter(self._pieces)

    def __getitem__(self, j):
        return self._pieces[j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Contour) and self._pieces == other._pieces

    def __hash__(self) -> int:
        return hash(self._pieces)

    def __repr__(self) -> str:
        return f"Contour({list(self._pieces)!r})"

    @property
    def start(self) -> complex:
        return self._pieces[0].start

    @property
    def end(self) -> complex:
        return self._pieces[-1].end

    @property
    def closed(self) -> bool:
        return abs(self.end - self.start) <= CONNECT_TOL

    def __add__(self, other: "Contour") -> "Contour":
        return Contour(self._pieces + tuple(other))

    def reversed(self) -> "Contour":
        return Contour(p.reversed() for p in reversed(self._pieces))

    def to_json(self) -> str:
        return json.dumps([p.to_dict() for p in self._pieces])

    @classmethod
    def from_json(cls, text: str) -> "Contour":
        return cls(_piece_from_dict(d) for d in json.loads(text))


def detour_arc(pole: float, side: str, eps: float) -> Arc:
    """Semicircle of radius ``eps`` from ``pole - eps`` to ``pole + eps``.

    ``side`` names where the pole ends up relative to the detoured path: for
    ``lower`` the arc runs over the top (theta from pi to 0), leaving the pole
    below; for ``upper`` it runs underneath (theta from -pi to 0).
    """
    if side_sign(side) < 0:
        return Arc(complex(pole), eps, math.pi, 0.0)
    return Arc(complex(pole), eps, -math.pi, 0.0)


def build_detoured_segment(a: float, b: float, poles: Sequence[tuple[float, str]], eps: float) -> Contour:
    """Segment ``[a, b]`` with a semicircular detour of radius ``eps`` around each pole."""
    if not a < b:
        raise ContourError("need a < b")
    if not eps > 0:
        raise ContourError("eps must be positive")
    ordered = sorted((float(p), s) for p, s in poles)
    for p, s in ordered:
        side_sign(s)
        if p <= a or p >= b:
            raise ContourError(f"pole at endpoint or outside ({p} not in ({a}, {b}))")
        if min(p - a, b - p) <= eps:
            raise ContourError(f"eps={eps} too large: detour around {p} reaches an endpoint")
    for (p, _), (q, _) in zip(ordered, ordered[1:]):
        if q - p <= 2 * eps:
            raise ContourError(f"overlapping detours around {p} and {q}")
    pieces: list[PathPiece] = []
    left = a
    for p, s in ordered:
        pieces.append(Segment(left, p - eps))
        pieces.append(detour_arc(p, s, eps))
        left = p + eps
    pieces.append(Segment(left, b))
    return Contour(pieces)


# --------------------------------------------------------------------------
# Gauss-Kronrod 10/21 (QUADPACK qk21 abscissae and weights)

_XK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS = np.zeros(21)
GAUSS[1:10:2] = _WG
GAUSS[11:20:2] = _WG[::-1]
_EPS = np.finfo(float).eps


def _gk21(func, lo: np.ndarray, hi: np.ndarray):
    """Apply G10/K21 to every panel [lo_j, hi_j]; return (value, error) arrays."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    s = mid[:, None] + half[:, None] * NODES[None, :]
    fv = func(s)
    if not np.all(np.isfinite(fv)):
        bad = s[~np.isfinite(fv)][0]
        raise QuadratureError(f"integrand is not finite at parameter {bad!r}")
    k = fv @ KRONROD * half
    g = fv @ GAUSS * half
    habs = np.abs(half)
    resasc = (np.abs(fv - (k / np.where(half == 0, 1, half))[:, None] * 0.5) @ KRONROD) * habs
    resabs = np.abs(fv) @ KRONROD * habs
    err = np.abs(k - g)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where(resasc > 0, scaled, err)
    floor = 50 * _EPS * resabs
    err = np.where(floor > err, floor, err)
    return k, err, resabs


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error: float
    panels: int
    warning: str | None = None
    abs_value: float = 0.0

    def __complex__(self) -> complex:
        return complex(self.value)


def _integrate_piece(func, lo: float, hi: float, tol: float, rtol: float, max_panels: int):
    if lo == hi:
        return 0j, 0.0, 0, None, 0.0
    edges = np.linspace(lo, hi, 5)
    plo, phi = edges[:-1], edges[1:]
    parent_err = np.full(len(plo), np.inf)
    parent_val = np.zeros(len(plo), complex)
    done_val = 0j
    done_err = 0.0
    done_abs = 0.0
    count = len(plo)
    roundoff = False
    while True:
        val, err, rabs = _gk21(func, plo, phi)
        total = done_val + val.sum()
        total_err = done_err + err.sum()
        total_abs = done_abs + float(rabs.sum())
        target = max(tol, rtol * abs(total))
        if total_err <= target:
            return complex(total), float(total_err), count, None, total_abs
        share = target * np.abs(phi - plo) / abs(hi - lo)
        settled = (err <= 0.25 * share) | (err <= 50 * _EPS * rabs * 1.0000001)
        # sibling pairs whose split did not reduce the parent's error are noise-limited
        n = len(plo) // 2
        if np.isfinite(parent_err[0]):
            pair_err = err[:n] + err[n:]
            pair_val = val[:n] + val[n:]
            agree = np.abs(parent_val[:n] - pair_val) <= 1e-5 * (rabs[:n] + rabs[n:])
            stuck = agree & (pair_err >= 0.7 * parent_err[:n])
            if stuck.any():
                roundoff = True
                settled[:n] |= stuck
                settled[n:] |= stuck
        if np.all(settled) or count + int((~settled).sum()) > max_panels:
            warning = (
                f"quadrature error estimate {total_err:.3g} exceeds tolerance {target:.3g}"
                f" after {count} panels" + (" (roundoff-limited)" if roundoff else "")
            )
            return complex(total), float(total_err), count, warning, total_abs
        done_val += val[settled].sum()
        done_err += err[settled].sum()
        done_abs += float(rabs[settled].sum())
        keep = ~settled
        lo_s, hi_s, e_s, v_s = plo[keep], phi[keep], err[keep], val[keep]
        mid = 0.5 * (lo_s + hi_s)
        plo = np.concatenate([lo_s, mid])
        phi = np.concatenate([mid, hi_s])
        parent_err = np.concatenate([e_s, e_s])
        parent_val = np.concatenate([v_s, v_s])
        count += len(lo_s)


def path_integral(
    f: FunctionLike,
    path: Contour | PathPiece,
    variable: str | None = None,
    tol: float = 1e-12,
    *,
    rtol: float = 1e-13,
    bindings: Mapping[str, complex] | None = None,
    max_panels: int = MAX_PANELS,
) -> IntegralResult:
    """Integrate ``f`` along ``path``.

    ``f`` may be expression text, a parsed tree or a vectorised callable of a
    complex array.  Convergence is declared when the summed error estimate is
    at most ``max(tol, rtol*|value|)``; otherwise the result carries a warning
    and an :class:`AccuracyWarning` is emitted.
    """
    fn = as_function(f, variable, bindings)
    pieces = [path] if isinstance(path, (Segment, Arc)) else list(path)
    value = 0j
    error = 0.0
    panels = 0
    absval = 0.0
    warns = []
    for piece in pieces:
        def g(s, piece=piece):
            return fn(piece.point(s)) * piece.derivative(s)

        lo, hi = piece.bounds
        v, e, n, w, av = _integrate_piece(g, lo, hi, tol / len(pieces), rtol, max_panels)
        value += v
        error += e
        absval += av
        panels += n
        if w:
            warns.append(w)
    warning = "; ".join(warns) or None
    if warning:
        warnings.warn(warning, AccuracyWarning, stacklevel=2)
    return IntegralResult(value, error, panels, warning, absval)
