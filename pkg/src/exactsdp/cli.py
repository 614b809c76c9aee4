"""Command line front end.

    exactsdp solve INSTANCE [--out FILE] [--trace FILE] [--max-iters N]
                            [--phase1-only] [--verify-only SOLUTION]

Exit status: 0 success, 2 parse or validation failure, 3 invariant failure
during the solve, 4 iteration budget exceeded.  Errors are reported on
stderr as ``error: <category>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import IterationBudgetExceeded, ParseError, SdpError, ValidationError
from .io import load_solution, parse_instance, solution_to_dict, verify_solution, write_trace
from .rational import format_rational
from .solver import solve

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3
EXIT_BUDGET = 4


def _exit_code(exc: SdpError) -> int:
    if isinstance(exc, (ParseError, ValidationError)):
        return EXIT_INPUT
    if isinstance(exc, IterationBudgetExceeded):
        return EXIT_BUDGET
    return EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exactsdp", description="Exact rational interior point solver for semidefinite programs.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", help="solve an instance, or verify a solution with --verify-only")
    p.add_argument("instance", type=Path)
    p.add_argument("--out", type=Path, help="solution file (default: stdout)")
    p.add_argument("--trace", type=Path, help="write one JSON trace record per iteration")
    p.add_argument("--embed-trace", action="store_true", help="also store the trace inside the solution")
    p.add_argument("--max-iters", type=int, help="cap on iterations per phase")
    p.add_argument("--phase1-only", action="store_true", help="stop after the auxiliary phase")
    p.add_argument("--verify-only", type=Path, metavar="SOLUTION", help="re-check SOLUTION against INSTANCE")
    return parser


def _solve(args) -> int:
    problem = parse_instance(args.instance)
    if args.verify_only is not None:
        objective = verify_solution(problem, load_solution(args.verify_only))
        print(f"ok: {args.verify_only} is exactly feasible, objective {format_rational(objective)}")
        return EXIT_OK
    result = solve(problem, max_iters=args.max_iters, phase1_only=args.phase1_only)
    if args.trace is not None:
        write_trace(result.trace, args.trace)
    doc = solution_to_dict(result, problem, phase1_only=args.phase1_only, embed_trace=args.embed_trace)
    text = json.dumps(doc, indent=1) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
        print(
            f"{doc['status']}: objective {float(result.objective):.10g}, "
            f"iterations {result.iterations['phase1']}+{result.iterations['phase2']}",
            file=sys.stderr,
        )
    return EXIT_OK


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return _solve(args)
    except SdpError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return _exit_code(exc)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
