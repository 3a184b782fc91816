"""
solve - run one algorithm on an instance file.
"""
from __future__ import annotations

import argparse
from pathlib import Path

import pandas as pd

from sqpack.commands.options import add_solver_options, read_instance, solver_options, write_text
from sqpack.core.errors import PreconditionError
from sqpack.core.logger import log_command
from sqpack.services.bench_service import BENCH_COLUMNS, bench_csv, outcome_rows
from sqpack.services.instance_service import serialize_packing
from sqpack.services.solver_service import ALGORITHMS, solve_with


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="Pack an instance with one algorithm")
    parser.add_argument("instance", help="Instance file")
    parser.add_argument("--algo", required=True, choices=ALGORITHMS)
    parser.add_argument("-o", "--output", help="Packing file to write")
    parser.add_argument("--report", help="CSV report to write")
    add_solver_options(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    log_command("solve", f"algo={args.algo} instance={args.instance}")
    inst = read_instance(args.instance)
    outcome = solve_with(args.algo, inst, solver_options(args, [args.algo]))

    if args.output:
        if outcome.packing is None:
            raise PreconditionError("nfih output is a relaxed packing; add --feasibilize to write it")
        write_text(args.output, serialize_packing(outcome.packing))
    if args.report:
        rows = outcome_rows(Path(args.instance).name, inst, outcome)
        write_text(args.report, bench_csv(pd.DataFrame(rows, columns=BENCH_COLUMNS, dtype=object)))

    print(f"cost {outcome.cost}")
    return 0
