"""On-path poles: order, residue, Laurent head, and principal / by-pass / total values.

The total value of an integral over ``[a, b]`` through interior poles is the
integral along the segment with every pole detoured by a small semicircle.
For a meromorphic integrand that number does not depend on the detour radius
``eps`` at all, so the combined sequence ``sum(eps) = vp(eps) + vs(eps)`` is
extrapolated even when its two parts diverge separately.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from ._json import cjson, dumps
from .contour import (
    LOWER,
    AccuracyWarning,
    Arc,
    ContourError,
    Segment,
    detour_arc,
    path_integral,
    side_sign,
)
from .expr import FunctionLike, as_function

__all__ = [
    "MAX_ORDER",
    "PoleOrderError",
    "Divergent",
    "PoleSpec",
    "TracePoint",
    "TotalValueResult",
    "default_eps_sequence",
    "extrapolate",
    "pole_order",
    "residue",
    "laurent_head",
    "analyze_pole",
    "principal_value",
    "bypass_value",
    "total_value",
]

MAX_ORDER = 8
DEFAULT_PROBE_RADII = (1e-2, 5e-3, 2.5e-3, 1.25e-3)
DEFAULT_RESIDUE_RADIUS = 0.05
NOISE_REL = 1e-9


class PoleOrderError(ValueError):
    """The probe data does not look like a pole of supported order."""


@dataclass(frozen=True)
class Divergent:
    """Marker for a part that blows up like ``coef * eps**(-rate)``.

    ``rate == 0`` stands for logarithmic growth, ``coef * log(1/eps)``.
    """

    rate: float
    coef: complex

    def to_dict(self) -> dict:
        return {"divergent": {"rate": self.rate, "coef": cjson(self.coef)}}


Value = Union[complex, Divergent]


def _value_dict(v: Value) -> dict:
    return v.to_dict() if isinstance(v, Divergent) else cjson(v)


@dataclass(frozen=True)
class PoleSpec:
    location: complex
    order: int
    residue: complex
    laurent_head: tuple[complex, ...]
    side: str = LOWER

    def __post_init__(self):
        side_sign(self.side)
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if self.order and len(self.laurent_head) != self.order:
            raise ValueError("laurent_head must hold c_-m .. c_-1")

    def to_dict(self) -> dict:
        return {
            "location": cjson(self.location),
            "order": self.order,
            "residue": cjson(self.residue),
            "laurent_head": [cjson(c) for c in self.laurent_head],
            "side": self.side,
        }


@dataclass(frozen=True)
class TracePoint:
    eps: float
    vp: complex
    vs: complex
    sum: complex


@dataclass(frozen=True)
class TotalValueResult:
    vp: Value
    vs: Value
    total: complex
    epsilon_trace: tuple[TracePoint, ...]
    error_estimate: float
    exists: bool = True
    poles: tuple[PoleSpec, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def divergence_rate(self) -> float | None:
        for part in (self.vp, self.vs):
            if isinstance(part, Divergent):
                return part.rate
        return None

    def to_dict(self) -> dict:
        return {
            "vp": _value_dict(self.vp),
            "vs": _value_dict(self.vs),
            "total": cjson(self.total),
            "error": self.error_estimate,
            "exists": self.exists,
            "poles": [p.to_dict() for p in self.poles],
            "trace": [{"eps": p.eps, "sum": cjson(p.sum)} for p in self.epsilon_trace],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


# --------------------------------------------------------------------------
# extrapolation and divergence classification


def default_eps_sequence(gap: float, n: int = 9) -> list[float]:
    """Geometric sequence ``eps0 * 2**-j`` with ``eps0 = gap / 8``."""
    eps0 = gap / 8.0
    return [eps0 * 2.0**-j for j in range(n)]


def _check_eps(eps_sequence: Sequence[float]) -> np.ndarray:
    eps = np.asarray(eps_sequence, dtype=float)
    if eps.ndim != 1 or len(eps) < 4:
        raise ValueError("eps_sequence needs at least 4 points")
    if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("eps_sequence must be positive and strictly decreasing")
    return eps


def _polyfit0(x: np.ndarray, y: np.ndarray, deg: int) -> complex:
    re = np.polynomial.polynomial.polyfit(x, y.real, deg)[0]
    im = np.polynomial.polynomial.polyfit(x, y.imag, deg)[0]
    return complex(re, im)


def extrapolate(eps: Sequence[float], values: Sequence[complex]) -> tuple[complex, float]:
    """Value at ``eps = 0`` of a cubic least-squares fit through the last 5 points.

    The error estimate is the distance to the quadratic fit.
    """
    x = np.asarray(eps, dtype=float)[-5:]
    y = np.asarray(values, dtype=complex)[-5:]
    deg = min(3, len(x) - 2)
    v_hi = _polyfit0(x, y, deg)
    v_lo = _polyfit0(x, y, max(deg - 1, 0))
    return v_hi, abs(v_hi - v_lo)


def _classify(eps: np.ndarray, values: np.ndarray, absvals: np.ndarray | None = None) -> tuple[Value, float]:
    """Return the limit (or a divergence marker) and an error estimate.

    ``absvals`` are integrals of ``|f|`` behind each value; increments below
    ``NOISE_REL`` of them are treated as rounding noise.
    """
    d = np.diff(values)[-4:]
    e = eps[1:][-4:]
    scale = 1.0 + float(np.max(np.abs(values[-4:])))
    if absvals is not None:
        scale = max(scale, float(np.max(absvals[-5:])))
    mag = np.abs(d)
    if np.max(mag) <= NOISE_REL * scale:
        return extrapolate(eps, values)
    logs = np.log(np.maximum(mag, 1e-300))
    slope = float(np.polyfit(np.log(e), logs, 1)[0])
    if slope < -0.5:
        rate = round(-2.0 * slope) / 2.0
        x = eps[-6:]
        basis = np.column_stack([x**-rate, np.ones_like(x), x])
        coef = np.linalg.lstsq(basis, values[-6:], rcond=None)[0][0]
        return Divergent(rate, complex(coef)), math.inf
    if slope < 0.5:
        # constant increments under a fixed ratio: logarithmic growth
        ratio = float(np.median(eps[:-1] / eps[1:]))
        coef = complex(np.mean(d)) / math.log(ratio)
        if abs(coef) > 1e3 * NOISE_REL * scale:
            return Divergent(0.0, coef), math.inf
    return extrapolate(eps, values)


# --------------------------------------------------------------------------
# pole analysis


def _circle_points(z0: complex, r: float, n: int) -> np.ndarray:
    theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n + 0.1
    return z0 + r * np.exp(1j * theta)


def pole_order(
    f: FunctionLike,
    z0: complex,
    probe_radii: Sequence[float] = DEFAULT_PROBE_RADII,
    *,
    points: int = 64,
    max_order: int = MAX_ORDER,
) -> int:
    """Order of the pole of ``f`` at ``z0`` (0 for a regular point).

    Uses the circle mean of ``log|f|``, which for a function with no other
    zeros or poles inside the probe circle equals ``log|c_-m| - m log r``.
    """
    fn = as_function(f)
    radii = np.asarray(probe_radii, dtype=float)
    if len(radii) < 2 or np.any(radii <= 0):
        raise ValueError("need at least two positive probe radii")
    means = []
    for r in radii:
        with np.errstate(all="ignore"):
            vals = np.abs(fn(_circle_points(complex(z0), r, points)))
        if not np.all(np.isfinite(vals)) or np.any(vals == 0):
            raise PoleOrderError(f"non-finite or zero samples on the probe circle of radius {r:g}")
        means.append(float(np.mean(np.log(vals))))
    slope = float(np.polyfit(np.log(radii), means, 1)[0])
    nearest = round(slope)
    if abs(slope - nearest) >= 0.1:
        raise PoleOrderError(f"log|f| slope {slope:.3f} is not an integer: not a pole")
    order = max(0, -int(nearest))
    if order > max_order:
        raise PoleOrderError(f"pole order {order} exceeds supported maximum {max_order}")
    return order


def _circle_moment(fn, z0: complex, radius: float, power: int, tol: float) -> complex:
    circle = Arc(complex(z0), radius, -math.pi, math.pi)

    def g(z):
        return fn(z) * (z - z0) ** power

    with warnings.catch_warnings():
        # accuracy is judged by the radius cross-check instead
        warnings.simplefilter("ignore", AccuracyWarning)
        return path_integral(g, circle, tol=tol).value / (2j * math.pi)


def residue(f: FunctionLike, z0: complex, radius: float = DEFAULT_RESIDUE_RADIUS, *, tol: float = 1e-13) -> complex:
    """``(1/2 pi i)`` times the integral of ``f`` over a circle about ``z0``.

    The value is recomputed on the half radius; a disagreement beyond
    ``1e-8 * (1 + |value|)`` emits an :class:`AccuracyWarning`.
    """
    fn = as_function(f)
    value = _circle_moment(fn, z0, radius, 0, tol)
    check = _circle_moment(fn, z0, radius / 2, 0, tol)
    if abs(value - check) > 1e-8 * (1 + abs(value)):
        warnings.warn(
            f"residue at {z0} depends on the radius ({value} vs {check}); another pole may be inside",
            AccuracyWarning,
            stacklevel=2,
        )
    return value


def laurent_head(
    f: FunctionLike,
    z0: complex,
    max_order: int = MAX_ORDER,
    radius: float = DEFAULT_RESIDUE_RADIUS,
    *,
    order: int | None = None,
    tol: float = 1e-13,
) -> list[complex]:
    """Principal-part coefficients ``[c_-m, ..., c_-1]`` (empty for a regular point).

    Entries below ``1e-10`` of the largest magnitude are set to zero.
    """
    fn = as_function(f)
    m = pole_order(fn, z0, max_order=max_order) if order is None else order
    if m > max_order:
        raise PoleOrderError(f"pole order {m} exceeds {max_order}")
    coeffs = [_circle_moment(fn, z0, radius, j - 1, tol) for j in range(m, 0, -1)]
    big = max((abs(c) for c in coeffs), default=0.0)
    return [c if abs(c) >= 1e-10 * big else 0j for c in coeffs]


def analyze_pole(f: FunctionLike, z0: complex, side: str = LOWER, radius: float = DEFAULT_RESIDUE_RADIUS) -> PoleSpec:
    fn = as_function(f)
    m = pole_order(fn, z0)
    head = laurent_head(fn, z0, radius=radius, order=m)
    res = head[-1] if head else 0j
    return PoleSpec(complex(z0), m, res, tuple(head), side)


# --------------------------------------------------------------------------
# principal, by-pass and total values


def _normalize_poles(poles: Iterable, default_side: str = LOWER) -> list[tuple[float, str]]:
    out = []
    for p in poles:
        if isinstance(p, PoleSpec):
            loc, side = p.location, p.side
        elif isinstance(p, (tuple, list)):
            loc, side = p
        else:
            loc, side = p, default_side
        loc = complex(loc)
        if loc.imag != 0:
            raise ContourError("segment poles must be real")
        side_sign(side)
        out.append((loc.real, side))
    return sorted(out)


def _pole_gap(a: float, b: float, locs: Sequence[float]) -> float:
    pts = [a, *locs, b]
    return min(q - p for p, q in zip(pts, pts[1:]))


def _check_layout(a: float, b: float, locs: Sequence[float], eps_max: float) -> None:
    if not a < b:
        raise ContourError("need a < b")
    for p in locs:
        if p <= a or p >= b:
            raise ContourError(f"pole at endpoint or outside ({p} not in ({a}, {b}))")
    for p, q in zip(locs, locs[1:]):
        if q - p <= 2 * eps_max:
            raise ContourError(f"eps={eps_max} too large for poles {p} and {q}")
    if locs and min(min(p - a, b - p) for p in locs) <= eps_max:
        raise ContourError(f"eps={eps_max} too large: excision reaches an endpoint")


class _Recorder:
    """Collects quadrature warnings instead of letting each one through."""

    def __init__(self):
        self.notes: list[str] = []

    def __call__(self, f, path, tol):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", AccuracyWarning)
            res = path_integral(f, path, tol=tol)
        for w in caught:
            if issubclass(w.category, AccuracyWarning):
                self.notes.append(str(w.message))
            else:
                warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
        return res


def _pv_sequence(fn, a, b, locs, eps, tol, integrate):
    delta = float(eps[0])
    edges = [a]
    for p in locs:
        edges += [p - delta, p + delta]
    edges.append(b)
    outer = 0j
    outer_abs = 0.0
    err = 0.0
    for lo, hi in zip(edges[::2], edges[1::2]):
        r = integrate(fn, Segment(lo, hi), tol)
        outer += r.value
        outer_abs += r.abs_value
        err += r.error

    def folded(s):
        out = 0
        for p in locs:
            out = out + fn(p + s) + fn(p - s)
        return out

    vals = [outer]
    absvals = [outer_abs]
    inner = 0j
    inner_abs = 0.0
    for e_prev, e in zip(eps, eps[1:]):
        r = integrate(folded, Segment(float(e), float(e_prev)), tol)
        inner += r.value
        inner_abs += r.abs_value
        err += r.error
        vals.append(outer + inner)
        absvals.append(outer_abs + inner_abs)
    return np.asarray(vals, dtype=complex), np.asarray(absvals), err


def _arc_sequence(fn, poles, eps, tol, integrate):
    vals = []
    absvals = []
    err = 0.0
    for e in eps:
        v = 0j
        av = 0.0
        for p, side in poles:
            r = integrate(fn, detour_arc(p, side, float(e)), tol)
            v += r.value
            av += r.abs_value
            err = max(err, r.error)
        vals.append(v)
        absvals.append(av)
    return np.asarray(vals, dtype=complex), np.asarray(absvals), err


def _rounding_noise(fn, p: float, order: int, eps: float) -> float:
    """Rough size of the error from sampling ``f`` at distance ``eps`` from ``p``.

    The sample point ``p + s`` carries an absolute rounding of about
    ``ulp(p)``, i.e. a relative error ``order * ulp / eps`` in a pole term of
    the given order.  The affected integral has size ``~ pi * eps * |f|``.
    """
    with np.errstate(all="ignore"):
        mag = float(np.max(np.abs(fn(np.array([p + eps, p - eps, p + 1j * eps])))))
    if not math.isfinite(mag):
        return math.inf
    rel = 8 * max(order, 1) * np.finfo(float).eps * max(abs(p), 1.0) / eps
    return rel * math.pi * eps * mag


def _auto_eps_sequence(fn, a: float, b: float, locs: Sequence[float], target: float = 1e-8) -> list[float]:
    """Default grid ``gap/8 * 2**-j``; the tail is compressed where rounding noise would exceed ``target``."""
    eps = default_eps_sequence(_pole_gap(a, b, locs))
    orders = []
    for p in locs:
        try:
            orders.append(pole_order(fn, p))
        except (PoleOrderError, ArithmeticError):
            orders.append(1)
    floor = 0.0
    for p, m in zip(locs, orders):
        e = eps[-1]
        while e < eps[0] / 4 and _rounding_noise(fn, p, m, e) > target:
            e *= 1.25
        floor = max(floor, e)
    if floor <= eps[-1]:
        return eps
    return list(np.geomspace(eps[0], floor, len(eps)))


def principal_value(
    f: FunctionLike,
    a: float,
    b: float,
    poles: Sequence[float],
    eps_sequence: Sequence[float] | None = None,
    tol: float = 1e-12,
) -> Value:
    """Symmetric-excision principal value, or :class:`Divergent` when it blows up."""
    fn = as_function(f)
    locs = sorted(float(complex(p).real) for p in poles)
    if eps_sequence is None:
        _check_layout(a, b, locs, 0.0)
        eps_sequence = _auto_eps_sequence(fn, a, b, locs)
    eps = _check_eps(eps_sequence)
    _check_layout(a, b, locs, eps[0])
    vals, absvals, _ = _pv_sequence(fn, a, b, locs, eps, tol, _Recorder())
    value, _ = _classify(eps, vals, absvals)
    return value


def bypass_value(
    f: FunctionLike,
    pole: float,
    side: str = LOWER,
    eps_sequence: Sequence[float] | None = None,
    tol: float = 1e-12,
    *,
    check: bool = True,
) -> Value:
    """Limit of the semicircular detour integral around ``pole``.

    ``lower`` leaves the pole below the path (clockwise arc over the top), so a
    simple pole contributes ``-i pi res``; ``upper`` gives ``+i pi res``.
    """
    fn = as_function(f)
    if eps_sequence is None:
        eps_sequence = [0.125 * 2.0**-j for j in range(9)]
    eps = _check_eps(eps_sequence)
    vals, absvals, _ = _arc_sequence(fn, [(float(complex(pole).real), side)], eps, tol, _Recorder())
    value, _ = _classify(eps, vals, absvals)
    if check and not isinstance(value, Divergent):
        try:
            order = pole_order(fn, pole)
        except PoleOrderError:
            order = None
        if order == 1:
            expected = side_sign(side) * 1j * math.pi * residue(fn, pole, radius=min(DEFAULT_RESIDUE_RADIUS, eps[0]))
            if abs(value - expected) > 1e-6 * (1 + abs(expected)):
                warnings.warn(
                    f"by-pass value {value} disagrees with {expected} from the residue",
                    AccuracyWarning,
                    stacklevel=2,
                )
    return value


def total_value(
    f: FunctionLike,
    a: float,
    b: float,
    poles: Sequence = (),
    eps_sequence: Sequence[float] | None = None,
    tol: float = 1e-12,
    *,
    analyze: bool = False,
) -> TotalValueResult:
    """Principal value plus by-pass value, extrapolated as one sequence.

    ``poles`` holds ``(location, side)`` pairs, bare locations (side
    ``lower``) or :class:`PoleSpec` objects.  With ``analyze=True`` each pole
    is characterised (order, residue, Laurent head) in the result.
    """
    fn = as_function(f)
    plist = _normalize_poles(poles)
    locs = [p for p, _ in plist]
    if not plist:
        if not a < b:
            raise ContourError("need a < b")
        r = path_integral(fn, Segment(a, b), tol=tol)
        return TotalValueResult(r.value, 0j, r.value, (), r.error, True, (), (r.warning,) if r.warning else ())
    if eps_sequence is None:
        _check_layout(a, b, locs, 0.0)
        eps_sequence = _auto_eps_sequence(fn, a, b, locs)
    eps = _check_eps(eps_sequence)
    _check_layout(a, b, locs, eps[0])

    integrate = _Recorder()
    vp_vals, vp_abs, vp_err = _pv_sequence(fn, a, b, locs, eps, tol, integrate)
    vs_vals, vs_abs, vs_err = _arc_sequence(fn, plist, eps, tol, integrate)
    sums = vp_vals + vs_vals
    trace = tuple(
        TracePoint(float(e), complex(p), complex(s), complex(t)) for e, p, s, t in zip(eps, vp_vals, vs_vals, sums)
    )
    vp, _ = _classify(eps, vp_vals, vp_abs)
    vs, _ = _classify(eps, vs_vals, vs_abs)
    combined, ext_err = _classify(eps, sums, vp_abs + vs_abs)
    exists = not isinstance(combined, Divergent)
    notes = list(dict.fromkeys(integrate.notes))
    if exists:
        total = complex(combined)
        error = ext_err + vp_err + vs_err
    else:
        total = complex(sums[-1])
        error = math.inf
        notes.append(f"combined sequence diverges with rate {combined.rate}: total value does not exist")
    specs = tuple(analyze_pole(fn, p, s) for p, s in plist) if analyze else ()
    return TotalValueResult(vp, vs, total, trace, float(error), exists, specs, tuple(notes))
