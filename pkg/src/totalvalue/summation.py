"""Summability of numerical series: Cauchy limits, Cesaro (C,m), Abel and Wynn epsilon.

Series are given as term functions ``k -> a_k`` (vectorised over integer
arrays when possible) or as finite sequences.  Indices start at ``start``,
which defaults to 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.interpolate import pade

from ._json import cjson, dumps

__all__ = [
    "CONVERGED",
    "SUMMABLE",
    "DIVERGENT",
    "OSCILLATORY",
    "SummationError",
    "SummationResult",
    "WynnResult",
    "wynn_epsilon",
    "cauchy_limit",
    "cesaro_sum",
    "abel_sum",
    "default_x_grid",
]

CONVERGED = "converged"
SUMMABLE = "summable"
DIVERGENT = "divergent"
OSCILLATORY = "oscillatory"

ABEL_K_CAP = 2_000_000
_EPS = float(np.finfo(float).eps)
MAX_GROWTH = 6.0

Terms = Union[Callable, Sequence[complex], np.ndarray]


class SummationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SummationResult:
    method: str
    status: str
    value: complex | None
    error_estimate: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        has_value = self.status in (CONVERGED, SUMMABLE)
        if has_value != (self.value is not None):
            raise ValueError(f"status {self.status!r} inconsistent with value {self.value!r}")

    @property
    def has_value(self) -> bool:
        return self.value is not None

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "status": self.status,
            "error": self.error_estimate if math.isfinite(self.error_estimate) else None,
            "trace": [cjson(v) for v in self.diagnostics.get("tail", ())],
        }
        if self.value is not None:
            out["value"] = cjson(self.value)
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())


def term_array(terms: Terms, n: int, start: int = 1) -> np.ndarray:
    """First ``n`` terms as a complex array.

    A callable receives a float array of indices, so integer powers of
    ``k`` cannot overflow.  Non-finite terms raise :class:`SummationError`.
    """
    if not callable(terms):
        arr = np.asarray(terms, dtype=complex)
        if len(arr) < n:
            raise SummationError(f"only {len(arr)} terms available, {n} requested")
        out = arr[:n]
    else:
        k = np.arange(start, start + n, dtype=float)
        out = None
        try:
            with np.errstate(all="ignore"):
                out = np.asarray(terms(k), dtype=complex)
            if out.shape != k.shape:
                out = None
        except (TypeError, ValueError):
            pass
        if out is None:
            out = np.array([complex(terms(int(j))) for j in k])
    bad = ~np.isfinite(out)
    if bad.any():
        raise SummationError(f"term {start + int(np.argmax(bad))} is not finite")
    return out


# --------------------------------------------------------------------------
# Wynn epsilon


@dataclass(frozen=True)
class WynnResult:
    value: complex
    error: float
    column: int


def wynn_epsilon(sequence: Sequence[complex]) -> WynnResult:
    """Accelerate a sequence with the epsilon algorithm.

    Every even column of the table is an estimate of the limit.  The column
    whose last entry moved least from the previous even column is returned,
    with that move as the error estimate.  Columns that hit a vanishing
    difference stop the table; earlier columns are kept.
    """
    s = np.asarray(sequence, dtype=complex)
    if len(s) < 5:
        raise SummationError("wynn_epsilon needs at least 5 terms")
    prev = np.zeros(len(s) + 1, dtype=complex)  # column -1
    cur = s.copy()  # column 0
    evens = [cur]
    col = 0
    while len(cur) > 1:
        diff = cur[1:] - cur[:-1]
        scale = np.maximum(np.abs(cur[1:]), np.abs(cur[:-1]))
        if np.any(np.abs(diff) <= 1e-15 * scale) or not np.all(np.isfinite(diff)):
            if col % 2 == 0 and np.abs(diff[-1]) <= 1e-15 * scale[-1]:
                # an even column that has become constant is the exact limit
                return WynnResult(complex(cur[-1]), float(np.abs(diff[-1])), col)
            break
        nxt = prev[1 : len(cur)] + 1.0 / diff
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0:
            if not np.all(np.isfinite(cur)):
                break
            evens.append(cur)
    if len(evens) == 1:
        return WynnResult(complex(s[-1]), float(abs(s[-1] - s[-2])), 0)
    best = None
    for j in range(1, len(evens)):
        est = complex(evens[j][-1])
        err = float(abs(est - evens[j - 1][-1]))
        if best is None or err <= best.error:
            best = WynnResult(est, err, 2 * j)
    return best


# --------------------------------------------------------------------------
# Cauchy limit and Cesaro means


def _classify_tail(s: np.ndarray, tol: float) -> tuple[str, float]:
    """Decide converged / divergent / oscillatory from a sequence of sums."""
    n = len(s)
    w = max(8, n // 8)
    tail = s[-w:]
    spread = float(np.max(np.abs(tail - tail[-1])))
    if spread < tol:
        return CONVERGED, spread
    # drift between window means at n/4, n/2 and n
    def mean_at(end):
        lo = max(0, end - w)
        return complex(np.mean(s[lo:end]))

    m1, m2, m3 = mean_at(n // 4), mean_at(n // 2), mean_at(n)
    i1, i2 = abs(m2 - m1), abs(m3 - m2)
    if i2 > 0.5 * spread:
        if i2 >= 0.7 * i1:
            return DIVERGENT, math.inf
        # shrinking drift: convergent, but slower than tol allows at this length
        r = i2 / i1
        return CONVERGED, max(spread, i2 * r / (1 - r))
    return OSCILLATORY, spread


def cauchy_limit(terms: Terms, K_max: int = 4096, tol: float = 1e-10, *, start: int = 1) -> SummationResult:
    """Ordinary convergence of the partial sums."""
    if K_max < 16:
        raise ValueError("K_max must be at least 16")
    s = np.cumsum(term_array(terms, K_max, start))
    status, err = _classify_tail(s, tol)
    value = complex(s[-1]) if status == CONVERGED else None
    return SummationResult("cauchy", status, value, err, {"tail": tuple(s[-8:]), "K": K_max})


def cesaro_sum(terms: Terms, m: int = 1, K_max: int = 2**20, tol: float = 1e-6, *, start: int = 1) -> SummationResult:
    """(C, m) means of the partial sums.

    ``sigma_n = (m-fold cumulative sum of s)_n / binom(n + m, m)`` for
    0-based ``n``.
    """
    if m < 1:
        raise ValueError("Cesaro order must be at least 1")
    if K_max < 16:
        raise ValueError("K_max must be at least 16")
    s = np.cumsum(term_array(terms, K_max, start))
    sig = s
    for _ in range(m):
        sig = np.cumsum(sig)
    n = np.arange(K_max, dtype=float)
    norm = np.ones(K_max)
    for j in range(1, m + 1):
        norm *= (n + j) / j
    sig = sig / norm
    status, err = _classify_tail(sig, tol)
    err = max(err, float(abs(sig[-1] - sig[K_max // 2 - 1])))
    if status == CONVERGED:
        plain, _ = _classify_tail(s, tol)
        if plain != CONVERGED:
            status = SUMMABLE
    value = complex(sig[-1]) if status in (CONVERGED, SUMMABLE) else None
    return SummationResult(f"cesaro:{m}", status, value, err, {"tail": tuple(sig[-8:]), "K": K_max})


# --------------------------------------------------------------------------
# Abel summation


def default_x_grid() -> list[float]:
    return [1.0 - 2.0**-j for j in range(3, 19)]


def _growth_bound(a: np.ndarray, start: int) -> tuple[float, float]:
    """``C, p`` with ``|a_k| <= C k**p`` fitted on the given terms."""
    k = np.arange(start, start + len(a), dtype=float)
    k = np.maximum(k, 1.0)
    mag = np.maximum.accumulate(np.abs(a))
    sel = slice(len(a) // 8, None)
    good = mag[sel] > 0
    if not np.any(good):
        return 0.0, 0.0
    slope = float(np.polyfit(np.log(k[sel][good]), np.log(mag[sel][good]), 1)[0])
    p = max(0.0, math.ceil(2 * slope - 1e-9) / 2)
    if p > MAX_GROWTH:
        raise SummationError(f"terms grow like k^{slope:.2f}, beyond the polynomial bound k^{MAX_GROWTH:g}")
    C = float(np.max(np.abs(a) / k**p)) * 2.0
    return C, p


def _truncation(C: float, p: float, x: float, tol: float) -> int:
    """Smallest K with ``C K^p x^K / (1 - x) < tol``."""
    if C == 0:
        return 1
    lx = math.log(x)
    target = math.log(tol) + math.log1p(-x)

    def ok(K):
        return math.log(C) + p * math.log(K) + K * lx < target

    hi = 64
    while not ok(hi):
        hi *= 2
        if hi > 1 << 40:
            return hi
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _pade_predictive(a: np.ndarray) -> tuple[complex | None, float] | None:
    """Diagonal Pade value at ``x = 1`` of ``sum a_k x^k`` (``k >= 1``).

    The lowest order whose approximant reproduces the coefficients it was
    not fitted to is taken; the worst mismatch is the error estimate.  The
    value is ``None`` when that approximant has a pole at ``x = 1``.
    """
    c = np.concatenate([[0j], a])
    n = len(c)
    scale = float(np.max(np.abs(c))) or 1.0
    for m in range(1, min(10, (n - 1) // 3) + 1):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                p, q = pade(c[: 2 * m + 1], m)
            except np.linalg.LinAlgError:
                continue
        pc, qc = p.coeffs[::-1], q.coeffs[::-1]
        if qc[0] == 0 or not np.all(np.isfinite(qc)):
            continue
        pc, qc = pc / qc[0], qc / qc[0]
        e = np.zeros(n, dtype=complex)
        for j in range(n):
            acc = pc[j] if j < len(pc) else 0
            for i in range(1, min(j, len(qc) - 1) + 1):
                acc -= qc[i] * e[j - i]
            e[j] = acc
        miss = float(np.max(np.abs(e - c))) / scale
        if miss <= 1e-9:
            denom = np.sum(qc)
            if abs(denom) <= 1e-9 * float(np.sum(np.abs(qc))):
                return None, miss * scale
            return complex(np.sum(pc) / denom), miss * scale
    return None


def _finite_abel(a: np.ndarray, tol: float) -> SummationResult:
    s = np.cumsum(a)
    res = wynn_epsilon(s)
    value, err, column = res.value, res.error, res.column
    # an exactly rational generating function settles the value, or shows a pole at x = 1;
    # it also covers repeated partial sums, which stop the epsilon table at once
    rational = _pade_predictive(a)
    if rational is not None and (rational[0] is None or column == 0):
        value, err = rational
        column = -1
    status = SUMMABLE
    if value is None:
        status = DIVERGENT
        err = math.inf
    elif (_classify_tail(s, tol)[0] if len(s) >= 16 else None) == CONVERGED:
        status = CONVERGED
    return SummationResult(
        "abel", status, value, err, {"tail": tuple(s[-8:]), "K": len(s), "pade_column": column}
    )


def _clean_prefix(F: np.ndarray, noise: np.ndarray) -> int:
    """Number of leading ``F(x_j)`` whose increments stand clear of rounding noise."""
    d = np.abs(np.diff(F))
    n = 1
    while n < len(F) and d[n - 1] > 1e3 * (noise[n] + noise[n - 1]):
        n += 1
    return n


def _abel_blowup(F: np.ndarray) -> bool:
    """``F(x_j)`` increments that stop shrinking mean ``F`` is unbounded as ``x -> 1``.

    On the halving grid a finite limit gives increments shrinking by about
    one half; power growth gives ratios above one, logarithmic growth ratio one.
    """
    d = np.abs(np.diff(F))
    if len(d) < 4:
        return False
    tail = d[-4:]
    if tail[-1] <= 1e-8 * (1.0 + float(np.abs(F[-1]))):
        return False
    return bool(np.all(tail[1:] >= 0.9 * tail[:-1]))


def abel_sum(
    terms: Terms,
    x_grid: Sequence[float] | None = None,
    K_max: int = ABEL_K_CAP,
    tol: float = 1e-12,
    *,
    start: int = 1,
) -> SummationResult:
    """Abel sum ``lim_{x -> 1-} sum a_k x^k``.

    ``F(x)`` is summed up to the first ``K`` whose tail bound
    ``C K^p x^K / (1-x)`` is below ``tol/10``; grid points needing more than
    ``K_max`` terms are dropped.  The ``F(x_j)`` values are extrapolated to
    ``x = 1`` with the epsilon algorithm.

    A finite sequence of terms has no tail to damp; it is summed by the
    epsilon algorithm on its partial sums (the diagonal Pade reading of the
    power series at ``x = 1``).
    """
    if not callable(terms):
        return _finite_abel(np.asarray(terms, dtype=complex), tol)
    xs = default_x_grid() if x_grid is None else [float(x) for x in x_grid]
    if any(not 0 < x < 1 for x in xs):
        raise ValueError("x_grid entries must lie in (0, 1)")
    head = term_array(terms, 64, start)
    C, p = _growth_bound(head, start)
    Ks = [_truncation(C, p, x, tol / 10) for x in xs]
    used = [(x, K) for x, K in zip(xs, Ks) if K <= K_max]
    dropped = [x for x, K in zip(xs, Ks) if K > K_max]
    if len(used) < 5:
        raise SummationError(f"only {len(used)} grid points fit under K_max={K_max}")
    kmax = max(K for _, K in used)
    a = term_array(terms, kmax, start)
    k = np.arange(start, start + kmax, dtype=float)
    Fx, noise = [], []
    absa = np.abs(a)
    for x, K in used:
        w = np.exp(k[:K] * math.log(x))
        Fx.append(complex(np.sum(a[:K] * w)))
        noise.append(_EPS * float(np.sum(absa[:K] * w)))
    # late grid points can drown in cancellation among large terms
    n_clean = max(5, _clean_prefix(np.asarray(Fx), np.asarray(noise)))
    res = wynn_epsilon(Fx[:n_clean])
    value = res.value
    err = res.error
    blowup = _abel_blowup(np.asarray(Fx[:n_clean]))
    diag = {"tail": tuple(Fx[-8:]), "x": tuple(x for x, _ in used), "K": tuple(K for _, K in used),
            "dropped": tuple(dropped), "growth": (C, p), "column": res.column, "clean_points": n_clean}
    status = SUMMABLE
    if blowup or err > max(1e3 * tol, 1e-6 * (1 + abs(value))):
        diag["reason"] = "unbounded F(x)" if blowup else "extrapolation did not settle"
        status = DIVERGENT
        value = None
    else:
        plain, _ = _classify_tail(np.cumsum(a[: min(kmax, 1 << 16)]), max(tol, 1e-12))
        if plain == CONVERGED:
            status = CONVERGED
    return SummationResult("abel", status, value, err, diag)
