"""Fourier trigonometric coefficients from total-value integrals.

For period ``a`` and ``omega = 2 pi / a``::

    A_k = (2/a) v.t. int_{t0}^{t1} f(tau) cos(k omega tau) dtau
    B_k = (2/a) v.t. int_{t0}^{t1} f(tau) sin(k omega tau) dtau

with ``A_0 / 2`` stored as ``a0_half``.  Each product integrand gets its own
pole analysis: multiplying by ``sin(k tau)`` can lower the order of a pole at
the origin or remove it entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._json import cjson, dumps
from .contour import ContourError, QuadratureError, Segment, path_integral
from .expr import FunctionLike, as_function
from .singular import PoleOrderError, PoleSpec, analyze_pole, pole_order, total_value, _normalize_poles
from .summation import SUMMABLE, SummationResult, abel_sum, cauchy_limit, cesaro_sum

__all__ = [
    "FourierError",
    "SeriesCoefficients",
    "fourier_coefficients",
    "series_partial_sum",
    "series_value",
    "parse_method",
]

DEFAULT_KMAX = 64
EDGE_TOL = 1e-12


class FourierError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SeriesCoefficients:
    a0_half: complex
    A: tuple[complex, ...]
    B: tuple[complex, ...]
    period: float
    t0: float
    t1: float
    poles: tuple[PoleSpec, ...] = ()
    errors: tuple[float, ...] = ()
    orders: tuple[tuple[int, ...], ...] = ()
    function: Callable | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.A) != len(self.B):
            raise ValueError("A and B must have equal length")

    @property
    def k_max(self) -> int:
        return len(self.A)

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / self.period

    @property
    def realness_defect(self) -> float:
        vals = [self.a0_half, *self.A, *self.B]
        return float(max(abs(complex(v).imag) for v in vals))

    def scaled(self, factor: complex) -> "SeriesCoefficients":
        return SeriesCoefficients(
            self.a0_half * factor,
            tuple(a * factor for a in self.A),
            tuple(b * factor for b in self.B),
            self.period,
            self.t0,
            self.t1,
            self.poles,
            self.errors,
            self.orders,
            None,
        )

    def to_dict(self) -> dict:
        return {
            "a0_half": cjson(self.a0_half),
            "A": [cjson(v) for v in self.A],
            "B": [cjson(v) for v in self.B],
            "period": self.period,
            "t0": self.t0,
            "t1": self.t1,
            "k_max": self.k_max,
            "realness_defect": self.realness_defect,
            "poles": [p.to_dict() for p in self.poles],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _product_poles(g, plist) -> tuple[list, tuple[int, ...]]:
    """Keep only the poles that survive in ``g``; report their orders."""
    kept = []
    orders = []
    for p, side in plist:
        try:
            m = pole_order(g, p)
        except PoleOrderError:
            m = -1  # unknown shape: keep the detour
        orders.append(m)
        if m != 0:
            kept.append((p, side))
    return kept, tuple(orders)


def _vt(g, t0, t1, poles, split_at, eps_sequence, tol, breaks=()) -> tuple[complex, float]:
    """Total value over ``[t0, t1]``, integrated piecewise between ``breaks``."""
    edges = [t0, *sorted(b for b in set(breaks) if t0 < b < t1), t1]
    value, err = 0j, 0.0
    for lo, hi in zip(edges, edges[1:]):
        inside = [(p, s) for p, s in poles if lo < p < hi]
        if inside:
            r = total_value(g, lo, hi, inside, eps_sequence, tol)
            if not r.exists:
                raise FourierError("total value does not exist")
            value += r.total
            err += r.error_estimate
            continue
        # removable points still split the segment so no node lands on them
        cuts = [lo, *sorted(x for x in set(split_at) if lo < x < hi), hi]
        for a, b in zip(cuts, cuts[1:]):
            r = path_integral(g, Segment(a, b), tol=tol)
            value += r.value
            err += r.error
    return value, err


def fourier_coefficients(
    f: FunctionLike,
    poles: Sequence = (),
    k_max: int = DEFAULT_KMAX,
    t0: float = -math.pi,
    t1: float = math.pi,
    period: float | None = None,
    *,
    eps_sequence: Sequence[float] | None = None,
    tol: float = 1e-12,
    analyze: bool = True,
    breaks: Sequence[float] = (),
) -> SeriesCoefficients:
    """Coefficients ``A_0/2, A_1..A_kmax, B_1..B_kmax`` of ``f`` on ``[t0, t1]``.

    ``breaks`` lists jump points of a piecewise ``f``; integration is split
    there so the quadrature never straddles a discontinuity.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if not t0 < t1:
        raise ValueError("need t0 < t1")
    a = float(t1 - t0) if period is None else float(period)
    if a <= 0:
        raise ValueError("period must be positive")
    fn = as_function(f)
    plist = _normalize_poles(poles)
    for p, _ in plist:
        if not t0 < p < t1:
            raise ContourError(f"pole at endpoint or outside ({p} not in ({t0}, {t1}))")
        if any(abs(p - b) <= EDGE_TOL for b in breaks):
            raise ContourError(f"pole {p} coincides with a break point")
    omega = 2.0 * math.pi / a

    def integral(g, k, kind):
        kept, orders = _product_poles(g, plist)
        try:
            value, err = _vt(g, t0, t1, kept, [p for p, _ in plist], eps_sequence, tol, breaks)
        except (ContourError, QuadratureError, FourierError, ArithmeticError, ValueError) as exc:
            raise FourierError(f"{kind}_{k}: {exc}") from exc
        return value, err, orders

    v0, e0, o0 = integral(fn, 0, "A")
    a0_half = v0 / a
    A, B, errors, orders = [], [], [e0 / a], [o0]
    for k in range(1, k_max + 1):
        w = k * omega

        def gc(z, w=w):
            return fn(z) * np.cos(w * z)

        def gs(z, w=w):
            return fn(z) * np.sin(w * z)

        vc, ec, oc = integral(gc, k, "A")
        vs, es, os_ = integral(gs, k, "B")
        A.append(2.0 * vc / a)
        B.append(2.0 * vs / a)
        errors.append(2.0 * max(ec, es) / a)
        orders.append(oc + os_)
    specs = tuple(analyze_pole(fn, p, s) for p, s in plist) if analyze else ()
    return SeriesCoefficients(
        complex(a0_half), tuple(A), tuple(B), a, float(t0), float(t1), specs, tuple(errors), tuple(orders), fn
    )


def _terms(coeffs: SeriesCoefficients, t: float, K: int) -> np.ndarray:
    k = np.arange(1, K + 1)
    A = np.asarray(coeffs.A[:K], dtype=complex)
    B = np.asarray(coeffs.B[:K], dtype=complex)
    x = k * coeffs.omega * t
    return A * np.cos(x) + B * np.sin(x)


def series_partial_sum(coeffs: SeriesCoefficients, t: float, K: int | None = None) -> complex:
    """``A_0/2 + sum_{k=1}^{K} (A_k cos k omega t + B_k sin k omega t)``."""
    K = coeffs.k_max if K is None else int(K)
    if K < 0 or K > coeffs.k_max:
        raise ValueError(f"K={K} outside 0..{coeffs.k_max}")
    return complex(coeffs.a0_half + np.sum(_terms(coeffs, t, K)))


def parse_method(method) -> tuple[str, int]:
    """``'abel'``, ``'cauchy'``/``'partial'``, ``'cesaro'`` or ``'cesaro:m'`` -> (name, order)."""
    if isinstance(method, tuple):
        return str(method[0]), int(method[1])
    name, _, order = str(method).partition(":")
    name = name.strip().lower()
    if name == "partial":
        name = "cauchy"
    if name not in ("abel", "cauchy", "cesaro"):
        raise ValueError(f"unknown summation method {method!r}")
    return name, int(order) if order else 1


def _limit_from_inside(fn, x: float, inward: float) -> complex:
    with np.errstate(all="ignore"):
        v = complex(np.asarray(fn(np.array([complex(x)])))[0])
    if np.isfinite(v.real) and np.isfinite(v.imag):
        return v
    # one-sided limit by Richardson on two interior samples
    h = 1e-5 * max(1.0, abs(x))
    v1 = complex(fn(np.array([complex(x + inward * h)]))[0])
    v2 = complex(fn(np.array([complex(x + inward * h / 2)]))[0])
    return 2 * v2 - v1


def series_value(
    coeffs: SeriesCoefficients,
    t: float,
    method="abel",
    one_sided_limits: tuple[complex, complex] | None = None,
    *,
    breaks: Sequence[float] = (),
    tol: float = 1e-9,
) -> SummationResult:
    """Value of the series at ``t`` under a summation method.

    At a declared break point the midpoint of the supplied one-sided limits is
    returned.  At ``t0`` or ``t1`` the value is the midpoint of ``f(t0+)`` and
    ``f(t1-)``, taken from ``one_sided_limits`` when given and from the
    function otherwise.
    """
    t = float(t)
    if t < coeffs.t0 - EDGE_TOL or t > coeffs.t1 + EDGE_TOL:
        raise ValueError(f"t={t} outside [{coeffs.t0}, {coeffs.t1}]")
    if any(abs(t - b) <= EDGE_TOL for b in breaks):
        if one_sided_limits is None:
            raise ValueError(f"break point {t} needs one-sided limits")
        left, right = one_sided_limits
        value = 0.5 * (complex(left) + complex(right))
        return SummationResult("break-midpoint", SUMMABLE, value, 0.0, {"limits": (left, right)})
    if abs(t - coeffs.t0) <= EDGE_TOL or abs(t - coeffs.t1) <= EDGE_TOL:
        if one_sided_limits is not None:
            left, right = one_sided_limits
        elif coeffs.function is not None:
            left = _limit_from_inside(coeffs.function, coeffs.t0, +1.0)
            right = _limit_from_inside(coeffs.function, coeffs.t1, -1.0)
        else:
            raise ValueError("endpoint value needs one-sided limits or the source function")
        value = 0.5 * (complex(left) + complex(right))
        return SummationResult("endpoint-midpoint", SUMMABLE, value, 0.0, {"limits": (left, right)})
    name, order = parse_method(method)
    terms = _terms(coeffs, t, coeffs.k_max)
    if name == "abel":
        res = abel_sum(terms, tol=tol)
    elif name == "cesaro":
        res = cesaro_sum(terms, order, K_max=len(terms), tol=tol)
    else:
        res = cauchy_limit(terms, K_max=len(terms), tol=tol)
    value = None if res.value is None else res.value + coeffs.a0_half
    return SummationResult(res.method, res.status, value, res.error_estimate, res.diagnostics)
