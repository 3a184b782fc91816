"""
validate - check a packing file against its instance.
"""
from __future__ import annotations

import argparse

from sqpack.commands.options import read_instance
from sqpack.core.logger import log_command
from sqpack.services.instance_service import parse_packing, read_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("validate", help="Validate a packing file")
    parser.add_argument("packing", help="Packing file")
    parser.add_argument("--instance", required=True, help="Instance file")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    log_command("validate", args.packing)
    parse_packing(read_text(args.packing), read_instance(args.instance))
    print("ok")
    return 0
