"""Convergence semi-intervals of the kernel ``exp(-z (t - nu))`` as ``|z| -> oo``.

With ``z = |z| e^{i phi}`` the kernel decays along a path ``nu(theta)``
exactly when ``Re{e^{i phi} (t - nu(theta))} > 0``.  Two paths are analysed:

* ``semicircle``: ``nu = (t - t0)/2 e^{i theta} + (t0 + t)/2`` for
  ``theta`` in ``(-pi, 0)``, giving the semi-interval ``(-pi/2, 0]``;
* ``detoured``: the real segment with a radius-``eps`` arc
  ``nu = eps e^{i theta}`` under the pole at the origin, giving
  ``(-pi/2, arctan k]`` with ``t = (1 + k) eps``.

:func:`ray_limit_check` measures ``z * integral`` along a ray of fixed
``phi`` and compares it with ``f(t)`` (or ``f(t0)`` for the left anchor).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._json import cjson, dumps
from .contour import AccuracyWarning, Arc, Contour, ContourError, QuadratureError, Segment, path_integral
from .expr import FunctionLike, as_function
from .singular import _normalize_poles, total_value

__all__ = [
    "SEMICIRCLE",
    "DETOURED",
    "SEGMENT",
    "DEFAULT_GRID",
    "ConvergenceQuery",
    "Interval",
    "RayPoint",
    "RayLimitReport",
    "damping_condition",
    "convergence_semi_interval",
    "detour_exact_bound",
    "ray_limit_check",
]

SEMICIRCLE = "semicircle"
DETOURED = "detoured"
SEGMENT = "segment"
PATHS = (SEMICIRCLE, DETOURED, SEGMENT)
DEFAULT_GRID = (25.0, 50.0, 100.0, 200.0, 400.0, 800.0)

APPROACH_RELERR = 1e-2
APPROACH_RATIO = 0.8


@dataclass(frozen=True)
class ConvergenceQuery:
    t: float
    t0: float
    phi: float = 0.0
    eps: float | None = None
    grid: tuple[float, ...] = DEFAULT_GRID
    path: str = SEMICIRCLE

    def __post_init__(self):
        if not self.t > self.t0:
            raise ValueError("need t > t0")
        if self.path not in PATHS:
            raise ValueError(f"unknown path kind {self.path!r}")
        if self.path == DETOURED:
            if self.eps is None or not 0 < self.eps <= self.t:
                raise ValueError("detoured path needs 0 < eps <= t")
        if not -math.pi < self.phi <= math.pi:
            raise ValueError("phi must lie in (-pi, pi]")
        g = tuple(float(x) for x in self.grid)
        if any(x <= 0 for x in g) or any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("|z| grid must be positive and increasing")
        object.__setattr__(self, "grid", g)

    @property
    def k(self) -> float | None:
        return None if self.eps is None else self.t / self.eps - 1.0


def _nu(query: ConvergenceQuery, theta):
    if query.path == DETOURED:
        return query.eps * np.exp(1j * theta)
    return 0.5 * (query.t - query.t0) * np.exp(1j * theta) + 0.5 * (query.t0 + query.t)


def damping_condition(query: ConvergenceQuery, theta: float) -> tuple[bool, float]:
    """Whether ``Re{e^{i phi} (t - nu(theta))} > 0``, with that value.

    Only the sign matters for the limit, so ``|z|`` is taken as 1.
    """
    value = float(np.real(np.exp(1j * query.phi) * (query.t - _nu(query, theta))))
    return value > 0, value


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = True

    def contains(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def __str__(self) -> str:
        return f"{'[' if self.lo_closed else '('}{self.lo!r}, {self.hi!r}{']' if self.hi_closed else ')'}"

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}


def convergence_semi_interval(
    t: float | None = None,
    eps: float | None = None,
    *,
    zero_limit: bool = False,
    path: str = DETOURED,
) -> Interval:
    """Semi-interval of ``phi`` on which the kernel decays along the path.

    ``zero_limit`` gives the ``eps -> 0`` interval ``(-pi/2, pi/2)``.
    """
    if path == SEMICIRCLE:
        return Interval(-math.pi / 2, 0.0)
    if path not in (DETOURED, SEGMENT):
        raise ValueError(f"unknown path kind {path!r}")
    if zero_limit or path == SEGMENT:
        return Interval(-math.pi / 2, math.pi / 2, hi_closed=False)
    if t is None or eps is None:
        raise ValueError("need t and eps, or zero_limit")
    if not 0 < eps <= t:
        raise ValueError(f"need 0 < eps <= t (eps={eps}, t={t})")
    return Interval(-math.pi / 2, math.atan(t / eps - 1.0))


def detour_exact_bound(t: float, eps: float) -> float:
    """Supremum of ``phi`` for which the detour condition holds at every theta.

    Minimising ``k + 1 - cos(theta) + tan(phi) sin(theta)`` over theta gives
    ``arctan(sqrt(k^2 + 2k))``, which is above ``arctan(k)``.
    """
    k = t / eps - 1.0
    return math.atan(math.sqrt(k * k + 2 * k))


@dataclass(frozen=True)
class RayPoint:
    absz: float
    value: complex
    relerr: float


@dataclass(frozen=True)
class RayLimitReport:
    phi: float
    path: str
    anchor: str
    target: complex
    points: tuple[RayPoint, ...]
    verdict: str
    arc_fraction: float | None = None

    @property
    def errors(self) -> list[float]:
        return [p.relerr for p in self.points]

    @property
    def converges(self) -> bool:
        return self.verdict == "converges"

    def to_dict(self) -> dict:
        out = {
            "phi": self.phi,
            "path": self.path,
            "anchor": self.anchor,
            "target": cjson(self.target),
            "grid": [
                {"absz": p.absz, "value": cjson(p.value), "relerr": p.relerr if math.isfinite(p.relerr) else None}
                for p in self.points
            ],
            "verdict": self.verdict,
        }
        if self.arc_fraction is not None:
            out["arc_fraction"] = self.arc_fraction
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _verdict(errs: Sequence[float]) -> str:
    last, prev = errs[-1], errs[-2]
    if math.isfinite(last) and last <= APPROACH_RELERR and (last <= 1e-12 or last <= APPROACH_RATIO * prev):
        return "converges"
    if not math.isfinite(last) or (last > APPROACH_RELERR and last > prev and prev >= errs[-3]):
        return "diverges"
    return "inconclusive"


def ray_limit_check(
    f: FunctionLike,
    t: float,
    t0: float,
    poles: Sequence = (),
    phi: float = 0.0,
    grid: Sequence[float] = DEFAULT_GRID,
    path: str = SEGMENT,
    *,
    anchor: str = "right",
    eps: float | None = None,
    tol: float = 1e-12,
) -> RayLimitReport:
    """``z * integral f(nu) K(z, nu) dnu`` along the ray ``arg z = phi``.

    ``anchor='right'`` uses ``K = exp(-z (t - nu))`` and the target ``f(t)``;
    ``anchor='left'`` uses ``K = exp(-z (nu - t0))`` and the target
    ``f(t0)``.  ``path`` is ``semicircle``, ``detoured`` (arcs of radius
    ``eps`` passing under each pole) or ``segment`` (total value with the
    given pole sides).
    """
    if anchor not in ("right", "left"):
        raise ValueError("anchor must be 'right' or 'left'")
    grid = tuple(float(x) for x in grid)
    if len(grid) < 4:
        raise ValueError("|z| grid needs at least 4 points")
    if not t > t0:
        raise ValueError("need t > t0")
    if any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] <= 0:
        raise ValueError("|z| grid must be positive and increasing")
    plist = _normalize_poles(poles)
    fn = as_function(f)
    target = complex(np.asarray(fn(np.array([complex(t if anchor == "right" else t0)])))[0])
    if not (np.isfinite(target.real) and np.isfinite(target.imag)):
        raise ValueError("target value is not finite")

    if path == SEMICIRCLE:
        contour = Contour([Arc(complex(0.5 * (t0 + t)), 0.5 * (t - t0), -math.pi, 0.0)])
    elif path == DETOURED:
        locs = [p for p, _ in plist]
        if eps is None:
            eps = 0.5 * min([p - t0 for p in locs] + [t - p for p in locs] + [t - t0])
        pieces = []
        left = t0
        for p in locs:
            pieces += [Segment(left, p - eps), Arc(complex(p), eps, -math.pi, 0.0)]
            left = p + eps
        pieces.append(Segment(left, t))
        contour = Contour(pieces)
    elif path != SEGMENT:
        raise ValueError(f"unknown path kind {path!r}")

    points = []
    arc_fraction = None
    for r in grid:
        z = r * complex(math.cos(phi), math.sin(phi))
        if anchor == "right":
            def g(nu, z=z):
                return fn(nu) * np.exp(-z * (t - nu))
        else:
            def g(nu, z=z):
                return fn(nu) * np.exp(-z * (nu - t0))
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", AccuracyWarning)
                with np.errstate(over="ignore", invalid="ignore"):
                    if path == SEGMENT:
                        integral = total_value(g, t0, t, plist, tol=tol).total
                    else:
                        integral = path_integral(g, contour, tol=tol).value
                        if path == DETOURED and r == grid[-1]:
                            arcs = sum(
                                path_integral(g, piece, tol=tol).value for piece in contour if isinstance(piece, Arc)
                            )
                            total = abs(integral)
                            arc_fraction = float(abs(arcs) / total) if total > 0 else math.inf
            value = z * integral
            relerr = abs(value - target) / max(abs(target), 1e-300)
        except (QuadratureError, ContourError, OverflowError, FloatingPointError):
            value = complex(math.inf, 0)
            relerr = math.inf
        if not math.isfinite(relerr):
            relerr = math.inf
        points.append(RayPoint(r, complex(value), float(relerr)))
    verdict = _verdict([p.relerr for p in points])
    return RayLimitReport(float(phi), path, anchor, target, tuple(points), verdict, arc_fraction)
