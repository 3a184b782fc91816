"""
bounds - print the lower bounds and analysis quantities of an instance.
"""
from __future__ import annotations

import argparse
from fractions import Fraction

from sqpack.commands.options import read_instance
from sqpack.core.logger import log_command
from sqpack.models.packing import format_rational
from sqpack.services.bounds_service import lower_bounds


def register(subparsers) -> None:
    parser = subparsers.add_parser("bounds", help="Print lower bounds of an instance")
    parser.add_argument("instance", help="Instance file")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    log_command("bounds", args.instance)
    for key, value in lower_bounds(read_instance(args.instance)).items():
        print(f"{key} {format_rational(value) if isinstance(value, Fraction) else value}")
    return 0
