"""
render - draw a packing file as SVG, or PNG when the output ends in .png.
"""
from __future__ import annotations

import argparse

from sqpack.commands.options import read_instance, write_text
from sqpack.core.logger import log_command
from sqpack.services.instance_service import parse_packing, read_text
from sqpack.services.render_service import render_png, render_svg


def register(subparsers) -> None:
    parser = subparsers.add_parser("render", help="Draw a packing")
    parser.add_argument("packing", help="Packing file")
    parser.add_argument("--instance", required=True, help="Instance file")
    parser.add_argument("-o", "--output", required=True, help="SVG or PNG file to write")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    log_command("render", f"{args.packing} -> {args.output}")
    inst = read_instance(args.instance)
    packing = parse_packing(read_text(args.packing), inst)
    if args.output.lower().endswith(".png"):
        render_png(packing, inst, args.output)
    else:
        write_text(args.output, render_svg(packing, inst))
    return 0
