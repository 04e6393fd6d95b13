"""Command-line entry point: ``polympo solve | build | verify``.

Exit codes: 0 success, 1 verification failure or unsolvable system, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .document import MpoDocument
from .mpo import build_mpo, build_toeplitz
from .polybasis import PolynomialSpec
from .solver import DEFAULT_PRECISION, CoefficientVector, UnsolvableError, solve_coefficients
from .verify import (
    MAX_DENSE_DIM,
    CheckResult,
    LocalOperatorPair,
    c_coeff_agreement,
    dense_equivalence,
    pair_coefficient_check,
    power_sum_check,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEFAULT_BETAS = (Fraction(1), Fraction(1, 2))


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational literal: {text!r}")


def _poly_arg(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(t) for t in text.split(","))


def _positive_fraction(text: str) -> Fraction:
    value = _fraction(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _resolve_poly(k: int, alphas, beta) -> PolynomialSpec:
    beta = Fraction(1) if beta is None else beta
    if alphas is None:
        return PolynomialSpec.power(k, beta)
    if len(alphas) != k:
        raise UsageError(f"--poly gives {len(alphas)} coefficients but k={k}")
    try:
        return PolynomialSpec(alphas, beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _solve(k: int, poly: PolynomialSpec, precision: int) -> CoefficientVector:
    source = "power" if poly.is_pure_power else poly
    a = solve_coefficients(k, source, precision)
    if a.poly != poly:
        # keep beta from the command line on the solved vector
        a = CoefficientVector(a.k, a.values, a.precision_bits, a.residuals, poly, a.amplitude)
    return a


def _add_poly_flags(p: argparse.ArgumentParser):
    p.add_argument("--poly", type=_poly_arg, metavar="A1,...,AK",
                   help="coefficients of x^1..x^k as rationals (default: P(x) = x^k)")
    p.add_argument("--beta", type=_positive_fraction, default=None,
                   help="exponential decay factor beta > 0 (default: 1)")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, metavar="BITS",
                   help=f"working precision in bits, >= 53 (default: {DEFAULT_PRECISION})")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polympo",
        description="Exact bond-dimension k+3 MPOs for beta^r P(r) pair interactions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve for the Toeplitz coefficients a_1..a_k")
    p.add_argument("k", type=int)
    _add_poly_flags(p)
    p.add_argument("--table-order", action="store_true",
                   help="list a_k..a_1, the column order of the published coefficient table")
    p.add_argument("--digits", type=int, default=17, help="significant digits printed (default: 17)")

    p = sub.add_parser("build", help="build the MPO and write it as a JSON document")
    p.add_argument("k", type=int)
    _add_poly_flags(p)
    p.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")

    p = sub.add_parser("verify", help="run the oracle checks")
    p.add_argument("k", type=int, nargs="?")
    p.add_argument("--all", action="store_true", help="verify k = 1..6 for pure powers")
    _add_poly_flags(p)
    p.add_argument("--Lmax", type=int, default=6, help="largest chain for the dense check (default: 6)")
    p.add_argument("--nmax", type=int, default=None, help="largest power-sum n (default: 3k)")
    p.add_argument("--rmax", type=int, default=60, help="largest pair separation checked (default: 60)")
    p.add_argument("--d", type=int, default=2, help="local dimension of the test operators (default: 2)")
    p.add_argument("--seed", type=int, default=None,
                   help="also check a dense random symmetric X, Y pair drawn from this seed")
    p.add_argument("--json", type=Path, default=None, help="write a machine-readable report here")
    return parser


def cmd_solve(args, out) -> int:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    poly = _resolve_poly(args.k, args.poly, args.beta)
    a = _solve(args.k, poly, args.precision)
    ctx = a.context
    labelled = list(enumerate(a.values, start=1))
    if args.table_order:
        labelled.reverse()
    for i, v in labelled:
        print(f"a_{i} = {ctx.nstr(v, args.digits, strip_zeros=False)}", file=out)
    if a.amplitude != 1:
        print(f"amplitude P(1) = {a.amplitude}", file=out)
    for m, r in enumerate(a.residuals, start=1):
        print(f"residual eta_{m} = {ctx.nstr(r, 3)}", file=out)
    return EXIT_OK


def cmd_build(args, out) -> int:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    poly = _resolve_poly(args.k, args.poly, args.beta)
    a = _solve(args.k, poly, args.precision)
    doc = MpoDocument.from_mpo(a, build_mpo(a))
    if args.out is None:
        out.write(doc.dumps())
    else:
        doc.write(args.out)
    return EXIT_OK


def _natural_key(check: CheckResult):
    parts = re.split(r"(\d+)", check.param)
    return (check.k, check.name, [int(p) if p.isdigit() else p for p in parts])


def run_checks(k: int, poly: PolynomialSpec, precision: int, Lmax: int, nmax: int | None, rmax: int,
               d: int, seed: int | None, betas: Sequence[Fraction]) -> list[CheckResult]:
    a = _solve(k, poly, precision)
    ctx = a.context
    checks: list[CheckResult] = []

    eta_tol = float(ctx.mpf(2) ** -(precision - 12))
    checks.append(CheckResult("eta_residual", k, "max_m", float(a.max_residual), eta_tol))

    toeplitz = build_toeplitz(a)
    scale = max(abs(x) for x in toeplitz.dense) ** (k + 1)
    nil_tol = float(k * ctx.mpf(2) ** -(precision - 16) * max(1, scale))
    checks.append(CheckResult("nilpotency", k, f"power={k + 1}", float(toeplitz.nilpotency_defect()), nil_tol))

    n_max = 3 * k if nmax is None else nmax
    checks.extend(r for r in power_sum_check(a, n_max=n_max) if r.param != "n=0")

    c_tol = float(10 * ctx.eps)
    for n in range(0, min(n_max, 12) + 1):
        checks.append(CheckResult("c_coeffs", k, f"n={n}", c_coeff_agreement(a, n), c_tol))

    op_sets = [LocalOperatorPair.nilpotent(d)]
    if seed is not None:
        op_sets.append(LocalOperatorPair.random(d, seed))
    for beta in betas:
        mpo = build_mpo(a, beta)
        decorated = PolynomialSpec(poly.alphas, beta)
        for r in pair_coefficient_check(mpo, decorated, rmax):
            checks.append(CheckResult(r.name, r.k, f"beta={float(beta):g},{r.param}", r.err, r.tol))
        for ops in op_sets:
            for L in range(2, Lmax + 1):
                checks.append(dense_equivalence(mpo, decorated, ops, L))
    return checks


def cmd_verify(args, out) -> int:
    if args.all and args.k is not None:
        raise UsageError("give either k or --all, not both")
    if args.all and args.poly is not None:
        raise UsageError("--all checks pure powers only; drop --poly")
    if not args.all and args.k is None:
        raise UsageError("give k or --all")
    if args.d < 2:
        raise UsageError("--d must be >= 2")
    if args.Lmax < 2:
        raise UsageError("--Lmax must be >= 2")
    if args.d**args.Lmax > MAX_DENSE_DIM:
        raise UsageError(f"d^Lmax = {args.d}^{args.Lmax} exceeds the dense cap {MAX_DENSE_DIM}")
    ks = range(1, 7) if args.all else [args.k]
    if any(k < 1 for k in ks):
        raise UsageError("k must be >= 1")
    if args.nmax is not None and args.nmax < max(ks):
        raise UsageError("--nmax must be >= k")
    betas = DEFAULT_BETAS if args.beta is None else (args.beta,)

    checks = []
    for k in ks:
        poly = _resolve_poly(k, args.poly, None)
        checks.extend(run_checks(k, poly, args.precision, args.Lmax, args.nmax, args.rmax, args.d, args.seed,
                                 betas))
    checks.sort(key=_natural_key)
    for c in checks:
        print(c.line(), file=out)
    failed = [c for c in checks if not c.passed]
    print(f"SUMMARY checks={len(checks)} failed={len(failed)}", file=out)
    if args.json is not None:
        report = {"format_version": "1", "passed": not failed, "checks": [c.as_dict() for c in checks]}
        try:
            args.json.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write report to {args.json}: {exc.strerror or exc}") from exc
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"solve": cmd_solve, "build": cmd_build, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = _parser()
    args = parser.parse_args(argv)
    if args.precision < 53:
        parser.error("--precision must be >= 53")
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"polympo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsolvableError as exc:
        print(f"polympo: unsolvable: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"polympo: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
