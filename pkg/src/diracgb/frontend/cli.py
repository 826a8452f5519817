"""Command line: ``diracgb analyze | groebner | bracket``.

Exit codes: 0 consistent or regular, 2 inconsistent, 1 usage, parse or
analysis error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from ..dirac import IterationLimitExceeded, analyze
from ..phasespace import VelocityEliminationFailed, canonical_hamiltonian, poisson_bracket
from ..ratpoly import MonomialOrder
from .parser import ParseError, parse_polynomial, parse_problem, parse_rational, phase_space_names
from .report import render_report

EXIT_OK, EXIT_ERROR, EXIT_INCONSISTENT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _param(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=RATIONAL, got {text!r}")
    try:
        return name.strip(), parse_rational(value)
    except ParseError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="diracgb", description="Dirac constraint analysis of polynomial Lagrangians")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="problem file ('-' for stdin)")
        p.add_argument("--order", choices=("degrevlex", "lex"), default=None)
        p.add_argument("--param", type=_param, action="append", default=[], metavar="NAME=RAT")

    a = sub.add_parser("analyze", help="full constraint analysis")
    common(a)
    a.add_argument("--radical-check", "--check-radical", dest="radical_check", action="store_true", default=None)
    a.add_argument("--json", action="store_true", help="machine-readable report")
    a.add_argument("--eom", action="store_true", help="include equations of motion")
    a.add_argument("--max-iter", type=int, default=None)
    a.add_argument("--timings", action="store_true", help="include timings (breaks byte-identical output)")

    g = sub.add_parser("groebner", help="print the primary-constraint basis")
    common(g)

    b = sub.add_parser("bracket", help="print the Poisson bracket of two phase-space expressions")
    common(b)
    b.add_argument("expr1")
    b.add_argument("expr2")
    return ap


def _load(args):
    if args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    problem, system = parse_problem(text, dict(args.param))
    base = args.order or problem.options.get("order", "degrevlex")
    order = MonomialOrder.elimination(system.table, base)
    return problem, system, order


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # usage errors and --help; keep run() usable as a function
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    try:
        problem, system, order = _load(args)
        if args.command == "analyze":
            radical = args.radical_check if args.radical_check is not None else problem.options.get("radical_check", False)
            max_iter = args.max_iter if args.max_iter is not None else problem.options.get("max_iter")
            report = analyze(system, order, radical_check=bool(radical), max_iter=max_iter)
            fmt = "machine" if args.json else "text"
            out.write(render_report(report, fmt, eom=args.eom, timings=args.timings))
            return EXIT_INCONSISTENT if report.status == "inconsistent" else EXIT_OK
        if args.command == "groebner":
            ham = canonical_hamiltonian(system, order)
            out.write(f"H_c = {ham.H_c.to_str(order)}\n")
            for g in ham.G0:
                out.write(g.to_str(order) + "\n")
            return EXIT_OK
        table = system.table
        names = phase_space_names(table)
        params = {k: v for k, v in problem.params.items()}
        f = parse_polynomial(args.expr1, table, params, names)
        g = parse_polynomial(args.expr2, table, params, names)
        out.write(poisson_bracket(f, g).to_str(order) + "\n")
        return EXIT_OK
    except (OSError, ParseError, VelocityEliminationFailed, IterationLimitExceeded) as e:
        print(f"diracgb: error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
