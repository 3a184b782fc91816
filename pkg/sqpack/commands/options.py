"""
Argument types and option groups shared by several subcommands.
"""
from __future__ import annotations

import argparse
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from sqpack.core.config import settings
from sqpack.models.packing import Instance, to_fraction
from sqpack.models.schemas import PtasParams, SearchLimits
from sqpack.services.instance_service import parse_instance, read_text
from sqpack.services.solver_service import AlgorithmOptions

# nfih takes eps from the ptas flags when it feasibilizes
PTAS_READERS = {"ptas", "nfih"}


def rational(text: str) -> Fraction:
    """argparse type for "p/q", integers and finite decimals."""
    try:
        return to_fraction(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def add_solver_options(parser: argparse.ArgumentParser) -> None:
    """Knobs of nfih, ptas and the exact oracle."""
    shelves = parser.add_argument_group("shelf heuristics")
    shelves.add_argument("--reorder", action="store_true", help="Order bins by non-increasing item count")
    shelves.add_argument("--feasibilize", action="store_true", help="Turn the NFIH relaxed packing into a feasible one")

    ptas = parser.add_argument_group("ptas")
    ptas.add_argument("--eps", type=rational, default=settings.DEFAULT_EPS, help="Accuracy 1/k, k >= 4")
    ptas.add_argument("--mode", choices=["strict", "relaxed"], default="strict")
    ptas.add_argument("--gamma", type=rational, help="Linear grouping fraction (default eps^2)")
    ptas.add_argument("--small-threshold", type=rational, help="Small item threshold (relaxed ptas, nfih)")
    ptas.add_argument("--large-threshold", type=rational, help="Large item threshold (relaxed ptas)")

    exact = parser.add_argument_group("exact")
    exact.add_argument("--max-items", type=int, help=f"Oracle size limit (default {settings.EXACT_MAX_ITEMS})")
    exact.add_argument("--budget", type=int, help=f"Node budget (default {settings.EXACT_NODE_BUDGET})")
    exact.add_argument("--time-budget", type=float, help=f"Seconds (default {settings.EXACT_TIME_BUDGET})")


def solver_options(args: argparse.Namespace, algos: Iterable[str]) -> AlgorithmOptions:
    """
    Build AlgorithmOptions from parsed solver options.

    The ptas flags are validated only when one of algos reads them.
    """
    limits = {
        "max_items": args.max_items,
        "node_budget": args.budget,
        "time_budget": args.time_budget,
    }
    options = AlgorithmOptions(
        reorder=args.reorder,
        feasibilize=args.feasibilize,
        small_threshold=args.small_threshold,
        limits=SearchLimits(**{key: value for key, value in limits.items() if value is not None}),
    )
    if PTAS_READERS & set(algos):
        options.ptas = PtasParams(
            eps=args.eps,
            mode=args.mode,
            gamma=args.gamma,
            small_threshold=args.small_threshold,
            large_threshold=args.large_threshold,
        )
    return options


def read_instance(path: str) -> Instance:
    return parse_instance(read_text(path))


def write_text(path: str, text: str) -> None:
    Path(path).write_text(text, newline="\n")
