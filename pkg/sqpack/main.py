"""
sqpack - Main Entry Point

Command line for generating instances, solving, validating, bounding,
rendering and benchmarking square min-sum bin packings.
"""
import argparse
import sys
import time

from pydantic import ValidationError

from sqpack import __version__
from sqpack.commands import bench, bounds, gen, render, solve, validate
from sqpack.core.config import settings
from sqpack.core.errors import SqpackError
from sqpack.core.logger import log_error, log_result, logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqpack",
        description="Square min-sum bin packing: heuristics, 53/22-approximation, PTAS and exact oracle",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # One module per subcommand
    for command in (gen, solve, validate, bounds, render, bench):
        command.register(subparsers)
    return parser


def run(argv: list[str] | None = None) -> int:
    """
    Parse argv and dispatch to a subcommand.

    Returns:
        0 on success, 1 on a configuration or domain error, 2 on a usage error
    """
    # Validate configuration on startup
    try:
        settings.validate()
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    started = time.perf_counter()
    try:
        code = args.handler(args)
    except (SqpackError, ValidationError, OSError) as e:
        log_error(args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return 1

    log_result(args.command, "ok", (time.perf_counter() - started) * 1000)
    return code


def main() -> None:
    sys.exit(run())
