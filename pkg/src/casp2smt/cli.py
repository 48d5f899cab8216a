"""Command-line entry point.

Exit codes: 0 satisfiable, 1 unsatisfiable, 2 unknown, 10 and up for errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .errors import (
    Casp2SmtError,
    InconsistentConfig,
    NotTight,
    ParseError,
    SolverProtocolError,
    SolverSpawnFailure,
)
from .lincon import LexiconKind
from .parser import parse_program
from .pipeline import Mode, SolveConfig, Status, render_report, solve

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_UNKNOWN = 2
EXIT_PARSE_ERROR = 10
EXIT_CONFIG_ERROR = 11
EXIT_SOLVER_ERROR = 12
EXIT_OTHER_ERROR = 13


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casp2smt",
        description=(
            "Solve ground constraint answer set programs by compiling their "
            "input completion (plus a ranking formula for non-tight programs) "
            "to SMT-LIB 2."
        ),
    )
    parser.add_argument("file", help="program file (UTF-8)")
    parser.add_argument(
        "--logic",
        choices=["lia", "lra"],
        default="lia",
        help="constraint domain: integers (lia) or reals (lra)",
    )
    parser.add_argument(
        "--mode",
        choices=[m.value for m in Mode],
        default="auto",
        help="auto picks the encoding from tightness; tight rejects cyclic "
        "programs; ranking always adds the ranking formula",
    )
    parser.add_argument(
        "--solver",
        metavar="CMD",
        help="external SMT solver command reading SMT-LIB 2 on stdin "
        "(or use a {file} placeholder); falls back to $CASP2SMT_SOLVER",
    )
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="solve in-process by exhaustive semantics checks (no SMT solver)",
    )
    parser.add_argument(
        "--enumerate",
        type=int,
        default=1,
        metavar="N",
        help="number of answers to report, 0 for all (default 1)",
    )
    parser.add_argument(
        "--extended",
        action="store_true",
        help="report a constraint-variable valuation with each answer set",
    )
    parser.add_argument(
        "--var-box",
        nargs=2,
        type=int,
        metavar=("LO", "HI"),
        help="bounds for constraint variables (required when enumerating "
        "extended answers)",
    )
    parser.add_argument(
        "--ranking",
        choices=["skip", "full"],
        default="skip",
        help="'full' emits a ranking implication for every non-input atom "
        "instead of skipping the ones the completion already covers",
    )
    parser.add_argument(
        "--bound-ranks",
        action="store_true",
        help="also assert 0 <= rank <= |atoms| for every rank variable",
    )
    parser.add_argument(
        "--emit-smtlib",
        metavar="PATH",
        help="write the generated SMT-LIB 2 script to PATH",
    )
    parser.add_argument(
        "--format",
        choices=["text", "jsonl"],
        default="text",
        help="output format",
    )
    return parser


def config_from_args(args: argparse.Namespace) -> SolveConfig:
    return SolveConfig(
        logic=LexiconKind.REAL_LINEAR
        if args.logic == "lra"
        else LexiconKind.INTEGER_LINEAR,
        mode=Mode(args.mode),
        enumerate=args.enumerate,
        extended=args.extended,
        var_box=tuple(args.var_box) if args.var_box else None,
        oracle_only=args.oracle,
        solver_cmd=args.solver,
        emit_path=args.emit_smtlib,
        ranking_full=args.ranking == "full",
        bound_ranks=args.bound_ranks,
        output_format=args.format,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        text = open(args.file, encoding="utf-8").read()
    except OSError as exc:
        print(f"casp2smt: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_OTHER_ERROR
    try:
        program = parse_program(text)
        report = solve(program, config_from_args(args))
    except ParseError as exc:
        print(f"casp2smt: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (InconsistentConfig, NotTight) as exc:
        print(f"casp2smt: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (SolverSpawnFailure, SolverProtocolError) as exc:
        print(f"casp2smt: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER_ERROR
    except Casp2SmtError as exc:
        print(f"casp2smt: {exc}", file=sys.stderr)
        return EXIT_OTHER_ERROR
    output = render_report(report, args.format)
    if output:
        print(output)
    return {
        Status.SAT: EXIT_SAT,
        Status.UNSAT: EXIT_UNSAT,
        Status.UNKNOWN: EXIT_UNKNOWN,
    }[report.status]


if __name__ == "__main__":
    sys.exit(main())
