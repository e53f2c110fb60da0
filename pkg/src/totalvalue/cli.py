"""Command-line front end: ``totalvalue <subcommand> [flags]``.

Exit status is 0 on success, 1 when a computation fails and 2 on a usage
error (bad flag, malformed number or expression, pole on an endpoint).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import warnings
from typing import Sequence

import numpy as np

from ._json import cjson, dumps
from .contour import LOWER, SIDES, AccuracyWarning, ContourError
from .convergence import DETOURED, SEGMENT, SEMICIRCLE, convergence_semi_interval, detour_exact_bound, ray_limit_check
from .expr import ExprError, compile_expr, evaluate, free_variables, parse, to_text
from .fourier import fourier_coefficients, series_partial_sum, series_value
from .singular import Divergent, bypass_value, principal_value, total_value
from .summation import abel_sum, cauchy_limit, cesaro_sum
from .verify import FAILURE, REGISTRY, report_json, resolve_id, run_check

__all__ = ["UsageError", "build_parser", "dispatch", "main", "parse_num", "parse_pole"]

NUM_FLAGS = ("--from", "--to", "--at", "--eps", "--tol", "--phi", "--pole")
MODES = ("vp", "vs", "vt")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_num(text: str) -> float:
    """A real number written as a decimal literal or an expression in ``pi`` and ``e``."""
    try:
        node = parse(text)
        if free_variables(node):
            raise UsageError(f"number {text!r} has free variables")
        z = evaluate(node)
    except ExprError as exc:
        raise UsageError(f"bad number {text!r}: {exc}") from exc
    if abs(z.imag) > 1e-15 * max(1.0, abs(z.real)) or not math.isfinite(z.real):
        raise UsageError(f"number {text!r} is not a finite real")
    return float(z.real)


def parse_pole(text: str) -> tuple[float, str]:
    """``LOC`` or ``LOC:SIDE`` with side ``lower`` (default) or ``upper``."""
    loc, _, side = text.rpartition(":") if ":" in text else (text, "", LOWER)
    side = side or LOWER
    if side not in SIDES:
        raise UsageError(f"pole side must be one of {', '.join(SIDES)}, got {side!r}")
    return parse_num(loc), side


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    """Glue ``--from -pi`` into ``--from=-pi`` so negative numbers are not taken for flags."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in NUM_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
            else:
                out += [tok, nxt]
        else:
            out.append(tok)
    return out


def _common(p: argparse.ArgumentParser, *, interval: bool = True, poles: bool = True) -> None:
    p.add_argument("--expr", required=True, help="expression text")
    if interval:
        p.add_argument("--from", dest="lo", type=str, default="-pi", help="left end (default -pi)")
        p.add_argument("--to", dest="hi", type=str, default="pi", help="right end (default pi)")
    if poles:
        p.add_argument("--pole", action="append", default=[], help="LOC[:lower|upper], repeatable")
    p.add_argument("--tol", type=str, default=None, help="quadrature tolerance")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="totalvalue", description="Total values of singular integrals and series summability.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="parse and print an expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--at", default=None, help="evaluate at this value of the single variable")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json",), default="json")

    p = sub.add_parser("integrate", help="principal, by-pass or total value over a segment")
    _common(p)
    p.add_argument("--mode", choices=MODES, default="vt")
    p.add_argument("--eps", default=None, help="largest eps of the halving sequence")

    p = sub.add_parser("fourier", help="Fourier coefficients from total values")
    _common(p)
    p.add_argument("--kmax", type=int, default=64)
    p.add_argument("--eps", default=None, help="largest eps of the halving sequence")
    p.add_argument("--at", default=None, help="also sum the series at this point")
    p.add_argument("--method", default="abel", help="abel | partial | cesaro[:m] for --at")

    p = sub.add_parser("sum", help="sum a series given by its term in k")
    _common(p, interval=False, poles=False)
    p.add_argument("--method", default="abel", help="abel | partial | cesaro[:m]")
    p.add_argument("--kmax", type=int, default=None, help="number of terms for partial and cesaro")
    p.add_argument("--start", type=int, default=1, help="first index (default 1)")

    p = sub.add_parser("converge", help="ray limit z * integral as |z| grows")
    _common(p)
    p.add_argument("--at", required=True, help="point t where the limit is taken")
    p.add_argument("--phi", default="0", help="ray angle arg z")
    p.add_argument("--path", choices=(SEGMENT, SEMICIRCLE, DETOURED), default=SEGMENT)
    p.add_argument("--eps", default=None, help="detour radius for the detoured path")
    p.add_argument("--anchor", choices=("right", "left"), default="right")

    p = sub.add_parser("verify", help="run the identity registry")
    p.add_argument("--check", action="append", default=[], help="check id or eqN prefix, repeatable")
    p.add_argument("--profile", choices=("default", "strict"), default="default")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("plot", help="CSV of partial sums against the function")
    _common(p)
    p.add_argument("--kmax", type=int, default=64)
    p.add_argument("--terms", default="4,16,64", help="comma-separated K values")
    p.add_argument("--points", type=int, default=201)
    return parser


# --------------------------------------------------------------------------
# output helpers


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _value(v) -> dict:
    return v.to_dict() if isinstance(v, Divergent) else cjson(v)


def _eps_sequence(args) -> list[float] | None:
    if getattr(args, "eps", None) is None:
        return None
    e0 = parse_num(args.eps)
    if not e0 > 0:
        raise UsageError("--eps must be positive")
    return [e0 * 2.0**-j for j in range(9)]


def _tol(args, default: float = 1e-12) -> float:
    if args.tol is None:
        return default
    t = parse_num(args.tol)
    if not t > 0:
        raise UsageError("--tol must be positive")
    return t


def _function(text: str, variable: str | None = None):
    try:
        node = parse(text)
    except ExprError as exc:
        raise UsageError(f"bad expression: {exc}") from exc
    names = sorted(free_variables(node))
    if variable is None:
        if len(names) > 1:
            raise UsageError(f"expression has several variables: {', '.join(names)}")
        variable = names[0] if names else "t"
    elif any(n != variable for n in names):
        raise UsageError(f"expression may only use the variable {variable}")
    return compile_expr(node, variable)


def _interval_and_poles(args) -> tuple[float, float, list[tuple[float, str]]]:
    lo, hi = parse_num(args.lo), parse_num(args.hi)
    if not lo < hi:
        raise UsageError("need --from < --to")
    poles = [parse_pole(p) for p in args.pole]
    for loc, _ in poles:
        if loc == lo or loc == hi:
            raise UsageError(f"pole at endpoint ({loc})")
        if not lo < loc < hi:
            raise UsageError(f"pole {loc} outside [{lo}, {hi}]")
    return lo, hi, poles


# --------------------------------------------------------------------------
# subcommands


def _cmd_parse(args) -> int:
    try:
        node = parse(args.expr)
    except ExprError as exc:
        raise UsageError(f"bad expression: {exc}") from exc
    out = {"expr": to_text(node), "variables": sorted(free_variables(node))}
    if args.at is not None:
        names = out["variables"]
        if len(names) > 1:
            raise UsageError("--at needs an expression in one variable")
        out["value"] = cjson(evaluate(node, {names[0]: parse_num(args.at)} if names else {}))
    _emit(dumps(out), args.out)
    return 0


def _cmd_integrate(args) -> int:
    f = _function(args.expr)
    lo, hi, poles = _interval_and_poles(args)
    eps, tol = _eps_sequence(args), _tol(args)
    if args.mode == "vt":
        res = total_value(f, lo, hi, poles, eps, tol, analyze=bool(poles))
        if args.format == "csv":
            rows = [(p.eps, p.vp.real, p.vp.imag, p.vs.real, p.vs.imag, p.sum.real, p.sum.imag)
                    for p in res.epsilon_trace]
            _emit(_csv(("eps", "vp_re", "vp_im", "vs_re", "vs_im", "sum_re", "sum_im"), rows), args.out)
        else:
            _emit(dumps({"mode": "vt", **res.to_dict()}), args.out)
        return 0 if res.exists else 1
    if args.mode == "vp":
        if not poles:
            raise UsageError("--mode vp needs at least one --pole")
        value = principal_value(f, lo, hi, [p for p, _ in poles], eps, tol)
        parts = {"vp": _value(value)}
    else:
        if not poles:
            raise UsageError("--mode vs needs at least one --pole")
        parts = {"vs": [{"pole": p, "side": s, "value": _value(bypass_value(f, p, s, eps, tol))} for p, s in poles]}
    if args.format == "csv":
        items = [("vp", parts["vp"])] if "vp" in parts else [(f"{d['pole']}:{d['side']}", d["value"]) for d in parts["vs"]]
        rows = [(name, v.get("re", ""), v.get("im", ""), "divergent" if "divergent" in v else "finite") for name, v in items]
        _emit(_csv(("part", "re", "im", "kind"), rows), args.out)
    else:
        _emit(dumps({"mode": args.mode, **parts}), args.out)
    return 0


def _cmd_fourier(args) -> int:
    f = _function(args.expr)
    lo, hi, poles = _interval_and_poles(args)
    if args.kmax < 1:
        raise UsageError("--kmax must be at least 1")
    c = fourier_coefficients(f, poles, args.kmax, lo, hi, eps_sequence=_eps_sequence(args), tol=_tol(args))
    if args.format == "csv":
        rows = [(0, c.a0_half.real, c.a0_half.imag, 0.0, 0.0)]
        rows += [(k, a.real, a.imag, b.real, b.imag) for k, (a, b) in enumerate(zip(c.A, c.B), start=1)]
        _emit(_csv(("k", "A_re", "A_im", "B_re", "B_im"), rows), args.out)
        return 0
    out = c.to_dict()
    if args.at is not None:
        out["series"] = {"t": parse_num(args.at), **series_value(c, parse_num(args.at), args.method).to_dict()}
    _emit(dumps(out), args.out)
    return 0


def _cmd_sum(args) -> int:
    terms = _function(args.expr, "k")
    name, _, order = args.method.partition(":")
    tol = _tol(args, 1e-12 if name == "abel" else 1e-10)
    if name == "abel":
        res = abel_sum(terms, tol=tol, start=args.start)
    elif name in ("partial", "cauchy"):
        res = cauchy_limit(terms, args.kmax or 4096, tol, start=args.start)
    elif name == "cesaro":
        try:
            m = int(order) if order else 1
        except ValueError as exc:
            raise UsageError(f"bad Cesaro order in {args.method!r}") from exc
        res = cesaro_sum(terms, m, args.kmax or 2**20, _tol(args, 1e-6), start=args.start)
    else:
        raise UsageError(f"unknown method {args.method!r}")
    if args.format == "csv":
        v = res.value
        rows = [(res.method, res.status, "" if v is None else v.real, "" if v is None else v.imag, res.error_estimate)]
        _emit(_csv(("method", "status", "value_re", "value_im", "error"), rows), args.out)
    else:
        _emit(res.to_json(), args.out)
    return 0 if res.value is not None else 1


def _cmd_converge(args) -> int:
    f = _function(args.expr)
    lo, hi, poles = _interval_and_poles(args)
    t, phi = parse_num(args.at), parse_num(args.phi)
    if not lo < t <= hi:
        raise UsageError("--at must lie in (--from, --to]")
    if not -math.pi < phi <= math.pi:
        raise UsageError("--phi must lie in (-pi, pi]")
    eps = parse_num(args.eps) if args.eps is not None else None
    rep = ray_limit_check(f, t, lo, [p for p in poles if p[0] < t], phi, path=args.path, anchor=args.anchor,
                          eps=eps, tol=_tol(args))
    if args.format == "csv":
        rows = [(p.absz, p.value.real, p.value.imag, p.relerr) for p in rep.points]
        _emit(_csv(("absz", "value_re", "value_im", "relerr"), rows), args.out)
        return 0
    out = rep.to_dict()
    if args.path == SEMICIRCLE:
        out["semi_interval"] = convergence_semi_interval(path=SEMICIRCLE).to_dict()
    elif args.path == DETOURED and eps is not None and 0 < eps <= t:
        out["semi_interval"] = convergence_semi_interval(t, eps).to_dict()
        out["exact_bound"] = detour_exact_bound(t, eps)
    else:
        out["semi_interval"] = convergence_semi_interval(zero_limit=True).to_dict()
    _emit(dumps(out), args.out)
    return 0


def _cmd_verify(args) -> int:
    try:
        ids = [resolve_id(c) for c in args.check] if args.check else list(REGISTRY)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    reports = [run_check(cid, profile=args.profile) for cid in dict.fromkeys(ids)]
    if args.format == "csv":
        rows = [(r.id, r.status, r.abs_error, r.claim_error, r.tolerance) for r in reports]
        _emit(_csv(("id", "status", "abs_error", "claim_error", "tolerance"), rows), args.out)
    else:
        _emit(report_json(reports), args.out)
    return 1 if any(r.status == FAILURE for r in reports) else 0


def _cmd_plot(args) -> int:
    f = _function(args.expr)
    lo, hi, poles = _interval_and_poles(args)
    try:
        Ks = [int(x) for x in args.terms.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --terms {args.terms!r}") from exc
    if not Ks or any(k < 0 or k > args.kmax for k in Ks):
        raise UsageError(f"--terms must lie in 0..{args.kmax}")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    c = fourier_coefficients(f, poles, args.kmax, lo, hi, tol=_tol(args))
    header = ["t"]
    for K in Ks:
        header += [f"partial_{K}_re", f"partial_{K}_im"]
    header += ["target_re", "target_im"]
    rows = []
    for t in np.linspace(lo, hi, args.points):
        row = [float(t)]
        for K in Ks:
            s = series_partial_sum(c, float(t), K)
            row += [s.real, s.imag]
        target = complex(np.asarray(f(np.array([complex(t)])))[0])
        row += [target.real, target.imag] if np.isfinite(target) else ["", ""]
        rows.append(row)
    _emit(_csv(header, rows), args.out)
    return 0


COMMANDS = {
    "parse": _cmd_parse,
    "integrate": _cmd_integrate,
    "fourier": _cmd_fourier,
    "sum": _cmd_sum,
    "converge": _cmd_converge,
    "verify": _cmd_verify,
    "plot": _cmd_plot,
}


def dispatch(argv: Sequence[str]) -> int:
    """Run one subcommand and return its exit status."""
    try:
        args = build_parser().parse_args(_normalize_argv(argv))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AccuracyWarning)
            return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except ContourError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except (ArithmeticError, ValueError, ExprError) as exc:
        sys.stdout.write(dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}) + "\n")
        return 1


def main(argv: Sequence[str] | None = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
