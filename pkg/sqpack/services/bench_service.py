"""
Bench service - runs algorithms over a corpus directory and collects one
long-format table.

Cells (instance x algorithm) run on a thread pool through the event loop and
are gathered back in corpus x algorithm order, so the table does not depend
on scheduling.
"""
from __future__ import annotations

import asyncio
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import pandas as pd

from sqpack.core.config import settings
from sqpack.core.errors import PreconditionError, SqpackError
from sqpack.core.logger import log_error, logger
from sqpack.models.packing import Instance
from sqpack.services.bounds_service import lower_bounds
from sqpack.services.instance_service import parse_instance, read_text
from sqpack.services.solver_service import AlgorithmOptions, SolveOutcome, solve_with

BENCH_COLUMNS = [
    "instance",
    "algo",
    "status",
    "n",
    "cost",
    "lb1",
    "lb2",
    "r",
    "k",
    "b",
    "small_bins",
    "upper_bound_2R_plus_ffds",
    "ratio_vs_max_lb",
    "stage",
    "cost_before",
    "cost_after",
    "inflation_factor",
    "bound_claimed",
]


def load_corpus(directory: str | Path) -> list[tuple[str, Instance]]:
    """Every *.smsbpp file of a directory, sorted by file name."""
    root = Path(directory)
    if not root.is_dir():
        raise PreconditionError(f"corpus directory {root} does not exist")
    return [(path.name, parse_instance(read_text(path))) for path in sorted(root.glob("*.smsbpp"))]


def outcome_rows(name: str, inst: Instance, outcome: SolveOutcome, bounds: dict | None = None) -> list[dict]:
    """Table rows of one finished run: the run itself, then one row per PTAS stage."""
    bounds = bounds or lower_bounds(inst)
    row = {
        "instance": name,
        "algo": outcome.algo,
        "status": "ok",
        "n": inst.n,
        "cost": outcome.cost,
        "lb1": bounds["lb1"],
        "lb2": bounds["lb2"],
        "stage": "",
    }
    report = outcome.approx_report
    if report is not None:
        row.update(
            r=report.r,
            k=report.k,
            b=report.b,
            small_bins=report.small_bins,
            upper_bound_2R_plus_ffds=report.upper_bound_2R_plus_ffds,
            ratio_vs_max_lb=report.ratio_vs_max_lb,
        )

    rows = [row]
    if outcome.stage_report is not None:
        for stage in outcome.stage_report.rows:
            rows.append({
                "instance": name,
                "algo": outcome.algo,
                "status": "ok",
                "n": inst.n,
                "cost": outcome.cost,
                "stage": stage.name,
                "cost_before": stage.cost_before,
                "cost_after": stage.cost_after,
                "inflation_factor": stage.inflation_factor,
                "bound_claimed": stage.bound_claimed,
            })
    return rows


def _run_cell(name: str, inst: Instance, algo: str, options: AlgorithmOptions, timing: bool) -> list[dict]:
    bounds = lower_bounds(inst)
    started = time.perf_counter_ns()
    try:
        outcome = solve_with(algo, inst, options)
    except SqpackError as e:
        log_error(f"bench {name}/{algo}", e)
        rows = [{
            "instance": name,
            "algo": algo,
            "status": type(e).__name__,
            "n": inst.n,
            "lb1": bounds["lb1"],
            "lb2": bounds["lb2"],
            "stage": "",
        }]
    else:
        rows = outcome_rows(name, inst, outcome, bounds)
    if timing:
        rows[0]["micros"] = (time.perf_counter_ns() - started) // 1000
    return rows


async def run_bench(
    corpus: Sequence[tuple[str, Instance]],
    algos: Sequence[str],
    options: AlgorithmOptions | None = None,
    threads: int | None = None,
    timing: bool = False,
) -> pd.DataFrame:
    """
    Run every algorithm on every instance.

    Args:
        corpus: (name, instance) pairs
        algos: Algorithm names
        options: Shared algorithm options
        threads: Worker threads; settings.SQPACK_THREADS when omitted
        timing: Add a wall-clock "micros" column

    Returns:
        Long-format DataFrame, one row per cell plus one per PTAS stage
    """
    options = options or AlgorithmOptions()
    workers = threads or settings.SQPACK_THREADS
    loop = asyncio.get_running_loop()
    logger.info(f"Bench: {len(corpus)} instances x {len(algos)} algorithms on {workers} threads")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        cells = [
            loop.run_in_executor(pool, _run_cell, name, inst, algo, options, timing)
            for name, inst in corpus
            for algo in algos
        ]
        results = await asyncio.gather(*cells)

    columns = BENCH_COLUMNS + (["micros"] if timing else [])
    return pd.DataFrame([row for cell in results for row in cell], columns=columns, dtype=object)


def bench_corpus(
    corpus: Sequence[tuple[str, Instance]],
    algos: Sequence[str],
    options: AlgorithmOptions | None = None,
    threads: int | None = None,
    timing: bool = False,
) -> pd.DataFrame:
    """Blocking wrapper around run_bench."""
    return asyncio.run(run_bench(corpus, algos, options, threads, timing))


def _cell_text(value) -> str:
    if value is None or (not isinstance(value, str) and pd.isna(value)):
        return ""
    if isinstance(value, Fraction):
        return f"{float(value):.6f}"
    return str(value)


def bench_csv(df: pd.DataFrame) -> str:
    """CSV text of a bench table; rationals as six-decimal floats, blanks for missing cells."""
    return df.map(_cell_text).to_csv(index=False, lineterminator="\n")
