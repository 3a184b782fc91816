"""
bench - run several algorithms over a corpus directory into one CSV.
"""
from __future__ import annotations

import argparse

from sqpack.commands.options import add_solver_options, solver_options, write_text
from sqpack.core.errors import PreconditionError
from sqpack.core.logger import log_command
from sqpack.services.bench_service import bench_corpus, bench_csv, load_corpus
from sqpack.services.solver_service import ALGORITHMS


def algo_list(text: str) -> list[str]:
    names = [name.strip() for name in text.split(",") if name.strip()]
    unknown = [name for name in names if name not in ALGORITHMS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(
            f"unknown algorithms {unknown}; choose from {', '.join(ALGORITHMS)}"
        )
    return names


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="Benchmark algorithms over a corpus")
    parser.add_argument("--corpus", required=True, help="Directory of *.smsbpp files")
    parser.add_argument("--algos", required=True, type=algo_list, help="Comma-separated algorithm names")
    parser.add_argument("-o", "--output", required=True, help="CSV file to write")
    parser.add_argument("--timing", action="store_true", help="Add wall-clock micros per run")
    parser.add_argument("--threads", type=int, help="Worker threads (default SQPACK_THREADS)")
    add_solver_options(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    log_command("bench", f"corpus={args.corpus} algos={','.join(args.algos)}")
    if args.threads is not None and args.threads < 1:
        raise PreconditionError(f"--threads must be at least 1, got {args.threads}")
    corpus = load_corpus(args.corpus)
    table = bench_corpus(corpus, args.algos, solver_options(args, args.algos), args.threads, args.timing)
    write_text(args.output, bench_csv(table))
    return 0
