"""Total values of improper integrals through poles, with Fourier and summability tools.

The total value of an integral along a segment through poles is the
principal value plus the limit of the small detour arcs around each pole.
Their sum is finite even when both parts diverge, which gives Fourier
coefficients of functions with non-integrable poles and values to divergent
trigonometric series.
"""

from __future__ import annotations

from .contour import (
    LOWER,
    UPPER,
    AccuracyWarning,
    Arc,
    Contour,
    ContourError,
    IntegralResult,
    QuadratureError,
    Segment,
    build_detoured_segment,
    detour_arc,
    path_integral,
)
from .convergence import (
    ConvergenceQuery,
    Interval,
    RayLimitReport,
    convergence_semi_interval,
    damping_condition,
    detour_exact_bound,
    ray_limit_check,
)
from .expr import ExprError, ParseError, as_function, compile_expr, evaluate, parse, to_text
from .fourier import FourierError, SeriesCoefficients, fourier_coefficients, series_partial_sum, series_value
from .singular import (
    Divergent,
    PoleOrderError,
    PoleSpec,
    TotalValueResult,
    analyze_pole,
    bypass_value,
    laurent_head,
    pole_order,
    principal_value,
    residue,
    total_value,
)
from .summation import SummationError, SummationResult, abel_sum, cauchy_limit, cesaro_sum, wynn_epsilon
from .verify import CheckReport, run_all, run_check

__version__ = "0.1.0"

__all__ = [
    "LOWER",
    "UPPER",
    "AccuracyWarning",
    "Arc",
    "Contour",
    "ContourError",
    "IntegralResult",
    "QuadratureError",
    "Segment",
    "build_detoured_segment",
    "detour_arc",
    "path_integral",
    "ConvergenceQuery",
    "Interval",
    "RayLimitReport",
    "convergence_semi_interval",
    "damping_condition",
    "detour_exact_bound",
    "ray_limit_check",
    "ExprError",
    "ParseError",
    "as_function",
    "compile_expr",
    "evaluate",
    "parse",
    "to_text",
    "FourierError",
    "SeriesCoefficients",
    "fourier_coefficients",
    "series_partial_sum",
    "series_value",
    "Divergent",
    "PoleOrderError",
    "PoleSpec",
    "TotalValueResult",
    "analyze_pole",
    "bypass_value",
    "laurent_head",
    "pole_order",
    "principal_value",
    "residue",
    "total_value",
    "SummationError",
    "SummationResult",
    "abel_sum",
    "cauchy_limit",
    "cesaro_sum",
    "wynn_epsilon",
    "CheckReport",
    "run_all",
    "run_check",
]
