"""Command-line front end: ``shiftlab <command> [flags]``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage error,
3 a precision or tail bound could not be met.  Reports go to stdout,
diagnostics to stderr.  ``SHIFTLAB_DIGITS`` overrides the default digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from .arith import Precision
from .closedform import LogInt, format_closed, parse_atom
from .exact import format_quad
from .hypershift import Divergent, verify_case
from .lattice import EpsteinForm, NotPositiveDefinite, PrecisionUnreachable, epstein
from .modular import (
    G_PREFACTOR,
    RootObstruction,
    c_coefficients,
    check_h_multiplicativity,
    congruence_check,
    weight4_shift_form,
)
from .qseries import TailTooLarge, bfile
from .recognizer import PrecisionTooLow, default_radicals, recognize_case
from .tables import DataIntegrity, UnknownCase, dump_tables, find_rows

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def default_digits(fallback: int = 40) -> int:
    env = os.environ.get("SHIFTLAB_DIGITS")
    if env is None:
        return fallback
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"SHIFTLAB_DIGITS must be an integer, got {env!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _emit(obj, as_json: bool, text: str | None = None) -> None:
    if as_json:
        print(json.dumps(obj, indent=2))
    else:
        print(text if text is not None else json.dumps(obj, indent=2))


def _check_digits(d: int, lo: int = 10) -> int:
    if d < lo:
        raise UsageError(f"--digits must be >= {lo}")
    return d


# --- commands ----------------------------------------------------------------------

def cmd_coeffs(args) -> int:
    if args.terms < 1:
        raise UsageError("--terms must be positive")
    x = args.x
    if args.level != 4 and x == Fraction(1, 2):
        values = c_coefficients(args.level, args.terms)
        kind = "c"
        prefactor = format_quad(G_PREFACTOR[args.level])
    else:
        form = weight4_shift_form(args.level, x, args.terms)
        pure = form.series.shift(-x)
        values = [c.numerator if c.denominator == 1 else c for c in pure.coeffs[:args.terms]]
        kind = "f"
        prefactor = f"{form.base}^{form.exponent}"
    if args.bfile:
        Path(args.bfile).write_text(bfile(values))
    payload = {"level": args.level, "x": str(x), "kind": kind, "prefactor": prefactor,
               "coefficients": [str(v) for v in values]}
    text = (f"# level={args.level} x={x} kind={kind} prefactor={prefactor}\n"
            + ", ".join(str(v) for v in values))
    _emit(payload, args.output == "json", text)
    return EXIT_OK


def _select_rows(args):
    if args.all:
        return find_rows()
    if args.case:
        return find_rows(case=args.case)
    if args.level is None:
        raise UsageError("give --all, --case or --level")
    sign = None if args.sign is None else (1 if args.sign == "+" else -1)
    return find_rows(level=args.level, r=args.r, q_sign=sign)


def cmd_verify(args) -> int:
    digits = _check_digits(args.digits if args.digits is not None else default_digits())
    p = Precision(digits)
    reports = []
    for row in _select_rows(args):
        closed = row.closed if args.x == Fraction(1, 2) else None
        rep = verify_case(row.case, args.x, closed, p)
        reports.append(rep.to_json())
        if not rep.passed:
            print(f"FAIL {rep.case} x={args.x} diff={mpmath.nstr(rep.diff, 3)}"
                  + ("" if rep.diff_closed is None else f" closed={mpmath.nstr(rep.diff_closed, 3)}"),
                  file=sys.stderr)
    print(json.dumps(reports, indent=2))
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_FAIL


def cmd_congruences(args) -> int:
    rep = congruence_check(args.level, args.max_n)
    print(json.dumps(rep.to_json(), indent=2))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_hcheck(args) -> int:
    pairs = check_h_multiplicativity(args.m, args.K)
    bad = [pc for pc in pairs if not pc.ok]
    out = {"m": args.m, "K": args.K, "pairs": len(pairs),
           "failures": [{"k": pc.k, "j": pc.j, "product": str(pc.lhs), "coeff": str(pc.rhs)} for pc in bad],
           "pass": not bad}
    print(json.dumps(out, indent=2))
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_epstein(args) -> int:
    digits = args.digits if args.digits is not None else 8
    if not 1 <= digits <= 12:
        raise UsageError("--digits must be between 1 and 12 for direct summation")
    form = EpsteinForm(args.A, args.B, args.C, args.t)
    res = epstein(form, Precision(digits))
    out = {"A": str(form.A), "B": str(form.B), "C": str(form.C), "t": form.t,
           "value": repr(res.value), "error_bound": repr(res.error),
           "lower": repr(res.lower), "upper": repr(res.upper),
           "radius": repr(res.radius), "points": res.points}
    text = (f"S({form.A},{form.B},{form.C};{form.t}) = {res.value!r} +- {res.error:.3e}\n"
            f"enclosure [{res.lower!r}, {res.upper!r}] from {res.points} points (R = {res.radius:.6g})")
    _emit(out, args.output == "json", text)
    return EXIT_OK


def parse_atom_token(token: str):
    """``ln7``, ``pi``, ``pi^2``, ``catalan``, ``L-4``, ``L-8`` or any atom in
    closed-form syntax such as ``arctan(1/2)``."""
    token = token.strip()
    if token.startswith("ln") and token[2:].isdigit():
        return LogInt(int(token[2:]))
    if token in ("L-4", "L-8"):
        return parse_atom(f"L({token[1:]},2)")
    return parse_atom(token)


def cmd_recognize(args) -> int:
    digits = _check_digits(args.digits if args.digits is not None else default_digits(60))
    row = find_rows(case=args.case)[0]
    try:
        pool = [parse_atom_token(t) for t in args.atoms.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(str(exc))
    p = Precision(digits)
    cf = recognize_case(row.case, pool, p, max_coeff=args.max_coeff)
    out = {"case": row.id, "digits": digits, "atoms": [str(a) for a in pool],
           "radicals": [format_quad(r) for r in default_radicals(row.case.level)],
           "closed_form": None if cf is None else format_closed(cf)}
    if cf is not None:
        from .closedform import eval_closed
        from .recognizer import case_target

        with p.context():
            out["residual"] = mpmath.nstr(abs(case_target(row.case, p) - eval_closed(cf, p)), 5)
    print(json.dumps(out, indent=2))
    return EXIT_OK if cf is not None else EXIT_FAIL


def cmd_tables(args) -> int:
    text = dump_tables()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import build_report

    digits = _check_digits(args.digits if args.digits is not None else default_digits())
    ok, tsv = build_report(Path(args.out), Precision(digits), terms=args.terms)
    sys.stdout.write(tsv)
    return EXIT_OK if ok else EXIT_FAIL


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shiftlab", description="Shifted Ramanujan series toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", help="integer q-series coefficients")
    c.add_argument("--level", type=int, required=True, choices=(1, 2, 3, 4))
    c.add_argument("--x", type=_fraction, default=Fraction(1, 2))
    c.add_argument("--terms", type=int, default=64)
    c.add_argument("--bfile", help="also write an OEIS-style b-file here")
    c.add_argument("--output", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_coeffs)

    v = sub.add_parser("verify", help="hypergeometric side vs q side (and closed form)")
    v.add_argument("--all", action="store_true")
    v.add_argument("--case")
    v.add_argument("--level", type=int, choices=(1, 2, 3, 4))
    v.add_argument("--r", type=_fraction)
    v.add_argument("--sign", choices=("+", "-"))
    v.add_argument("--x", type=_fraction, default=Fraction(1, 2))
    v.add_argument("--digits", type=int)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("congruences", help="divisibility by 2n+1 and c_n = 1 mod p^2")
    g.add_argument("--level", type=int, required=True, choices=(1, 2, 3, 4))
    g.add_argument("--max-n", type=int, default=200)
    g.set_defaults(func=cmd_congruences)

    h = sub.add_parser("hcheck", help="multiplicativity of the h_m coefficients")
    h.add_argument("--m", type=int, required=True)
    h.add_argument("--K", type=int, default=15)
    h.set_defaults(func=cmd_hcheck)

    e = sub.add_parser("epstein", help="direct lattice sum S(A,B,C;t)")
    e.add_argument("--A", type=_fraction, required=True)
    e.add_argument("--B", type=_fraction, required=True)
    e.add_argument("--C", type=_fraction, required=True)
    e.add_argument("--t", type=int, default=2)
    e.add_argument("--digits", type=int)
    e.add_argument("--output", choices=("text", "json"), default="text")
    e.set_defaults(func=cmd_epstein)

    r = sub.add_parser("recognize", help="integer-relation search for a table row")
    r.add_argument("--case", required=True)
    r.add_argument("--atoms", required=True)
    r.add_argument("--digits", type=int)
    r.add_argument("--max-coeff", type=int, default=10 ** 6)
    r.set_defaults(func=cmd_recognize)

    t = sub.add_parser("tables", help="dataset export")
    t.add_argument("action", choices=("dump",))
    t.add_argument("--out")
    t.set_defaults(func=cmd_tables)

    rp = sub.add_parser("report", help="figures and a TSV summary")
    rp.add_argument("--out", required=True)
    rp.add_argument("--digits", type=int)
    rp.add_argument("--terms", type=int, default=40)
    rp.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, UnknownCase, NotPositiveDefinite, RootObstruction, DataIntegrity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TailTooLarge, PrecisionUnreachable, PrecisionTooLow, Divergent) as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
