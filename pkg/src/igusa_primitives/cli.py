"""Command-line front end.

Every subcommand prints one JSON document on standard output.  Exit codes:
0 on success, 1 when a mathematical precondition fails (the JSON then has
an ``error`` field), 2 for usage or parse errors.  Nothing is read from the
environment.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arith import PadicContext
from .derham import (
    DeRhamForm,
    frobenius_form,
    is_closed,
    nabla,
    restrict_to_L,
    solve_primitive,
    theta_inverse,
)
from .errors import DomainError, IndexOutOfRange, PolySyntaxError
from .genus1 import QSeries1, solve_weight_k
from .induced import generate_L_lambda
from .polyparse import parse_poly, parse_q_polynomial
from .qseries import QSeries, deplete, frobenius, theta, theta_poly, theta_poly_inverse
from .rep import highest_weight_vector
from .selftest import run_koszul_selftest, run_selftest

__all__ = ["main", "parse_poly", "run"]


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _context(args) -> PadicContext:
    return PadicContext(args.p, args.prec, args.N, args.g)


def _poly(args, d_g):
    if args.poly is None:
        raise UsageError("--poly is required")
    try:
        return parse_poly(args.poly, d_g)
    except (PolySyntaxError, IndexOutOfRange) as exc:
        raise UsageError(f"bad --poly: {exc}") from exc


def _series(args, ctx) -> QSeries:
    if args.series is None:
        raise UsageError("--series is required")
    return QSeries.from_json(_load_json(args.series), ctx)


def _form(args, ctx) -> DeRhamForm:
    if args.form is None:
        raise UsageError("--form is required")
    return DeRhamForm.from_json(_load_json(args.form), ctx, args.trunc)


def cmd_theta(args):
    ctx = _context(args)
    if args.index is None or not 1 <= args.index <= ctx.d_g:
        raise UsageError(f"--index must be in 1..{ctx.d_g}")
    return theta(args.index, _series(args, ctx)).to_json()


def cmd_theta_poly(args):
    ctx = _context(args)
    return theta_poly(_poly(args, ctx.d_g), _series(args, ctx)).to_json()


def cmd_deplete(args):
    ctx = _context(args)
    return deplete(_poly(args, ctx.d_g), _series(args, ctx)).to_json()


def cmd_invert_theta(args):
    ctx = _context(args)
    P = _poly(args, ctx.d_g)
    if args.form is not None:
        return theta_inverse(P, _form(args, ctx)).to_json()
    return theta_poly_inverse(P, _series(args, ctx)).to_json()


def cmd_nabla(args):
    return nabla(_form(args, _context(args))).to_json()


def cmd_check_closed(args):
    return {"closed": is_closed(_form(args, _context(args)))}


def cmd_solve(args):
    ctx = _context(args)
    P = _poly(args, ctx.d_g)
    return solve_primitive(P, _form(args, ctx), max_grade=args.max_grade).to_json()


def cmd_restrict_L(args):
    ctx = _context(args)
    P = _poly(args, ctx.d_g)
    f = _form(args, ctx)
    basis = generate_L_lambda(f.rep, highest_weight_vector(f.rep))
    report = solve_primitive(P, f, max_grade=args.max_grade, dimension_bound=basis.dimension)
    return {
        "dimension": basis.dimension,
        "in_submodule": restrict_to_L(basis, f, report),
        "iterations": report.iterations,
    }


def cmd_frobenius(args):
    ctx = _context(args)
    if args.form is not None:
        return frobenius_form(_form(args, ctx)).to_json()
    return frobenius(_series(args, ctx)).to_json()


def cmd_koszul_selftest(args):
    return run_koszul_selftest(args.seed)


def cmd_g1_solve(args):
    if args.k is None or args.f is None:
        raise UsageError("--k and --f are required")
    try:
        coeffs = parse_q_polynomial(args.f)
    except PolySyntaxError as exc:
        raise UsageError(f"bad --f: {exc}") from exc
    trunc = args.trunc if args.trunc is not None else Fraction(max(coeffs, default=0))
    f = QSeries1(coeffs, trunc, args.N)
    comps = solve_weight_k(args.k, f, args.p)
    return {"k": args.k, "p": args.p, "components": [c.to_json() for c in comps]}


def cmd_selftest(args):
    return run_selftest(args.seed)


COMMANDS = {
    "theta": cmd_theta,
    "theta-poly": cmd_theta_poly,
    "deplete": cmd_deplete,
    "invert-theta": cmd_invert_theta,
    "nabla": cmd_nabla,
    "check-closed": cmd_check_closed,
    "solve": cmd_solve,
    "restrict-L": cmd_restrict_L,
    "frobenius": cmd_frobenius,
    "koszul-selftest": cmd_koszul_selftest,
    "g1-solve": cmd_g1_solve,
    "selftest": cmd_selftest,
}


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text}") from exc


def build_parser() -> argparse.ArgumentParser:
    from .fixtures import DEFAULT_SEED

    parser = argparse.ArgumentParser(prog="igusa-primitives", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--p", type=int, default=5, help="odd prime (g1-solve also accepts 2)")
    parser.add_argument("--prec", type=int, default=20, help="p-adic precision")
    parser.add_argument("--N", type=int, default=1, help="tame level")
    parser.add_argument("--g", type=int, default=2, help="genus")
    parser.add_argument("--trunc", type=_rational, default=None, help="trace truncation bound")
    parser.add_argument("--max-grade", type=int, default=None, dest="max_grade")
    parser.add_argument("--poly", default=None, help='theta polynomial, e.g. "T1*T2+T3"')
    parser.add_argument("--form", default=None, help="form JSON file ('-' for stdin)")
    parser.add_argument("--series", default=None, help="q-series JSON file ('-' for stdin)")
    parser.add_argument("--index", type=int, default=None, help="theta index for 'theta'")
    parser.add_argument("--k", type=int, default=None, help="weight for g1-solve")
    parser.add_argument("--f", default=None, help='one-variable series for g1-solve, e.g. "q+2q^3"')
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for self-tests")
    return parser


def run(argv) -> tuple[int, str]:
    """Run one command; returns (exit code, JSON text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    try:
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        return 2, _dump({"error": "UsageError", "message": str(exc)})
    except DomainError as exc:
        return 1, _dump({"error": type(exc).__name__, "message": str(exc)})
    code = 0
    if args.command in ("selftest", "koszul-selftest") and not result["passed"]:
        code = 1
    return code, _dump(result)


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
