"""
gen - write a generated instance file.
"""
from __future__ import annotations

import argparse

from sqpack.commands.options import rational, write_text
from sqpack.core.logger import log_command, log_result
from sqpack.models.schemas import GeneratorSpec
from sqpack.services.instance_service import generate, serialize_instance


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="Generate an instance")
    parser.add_argument("--family", required=True, choices=["adversarial", "uniform", "all_large", "corner_mix"])
    parser.add_argument("--t", type=int, help="Adversarial family parameter (>= 3)")
    parser.add_argument("--n", type=int, help="Item count of random families")
    parser.add_argument("--lo", type=rational, help="Exclusive lower size bound")
    parser.add_argument("--hi", type=rational, help="Inclusive upper size bound")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("-o", "--output", required=True, help="Instance file to write")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    log_command("gen", f"family={args.family} seed={args.seed}")
    spec = GeneratorSpec(family=args.family, t=args.t, n=args.n, lo=args.lo, hi=args.hi, seed=args.seed)
    inst = generate(spec)
    write_text(args.output, serialize_instance(inst))
    log_result("gen", f"{inst.n} items -> {args.output}")
    return 0
