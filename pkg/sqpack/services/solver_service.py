"""
Solver service - runs any algorithm by name, for the solve and bench commands.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sqpack.core.errors import PreconditionError
from sqpack.core.logger import logger
from sqpack.models.packing import Instance, Packing, RelaxedPacking
from sqpack.models.schemas import ApproxReport, PtasParams, SearchLimits, StageReport
from sqpack.services.approx_service import solve_53_22
from sqpack.services.exact_service import exact_min_sum
from sqpack.services.ffds_service import ffds_minsum
from sqpack.services.packing_service import cost, ensure_feasible, reorder_bins_by_count
from sqpack.services.ptas_service import PTAS_LIMITS, ptas_solve
from sqpack.services.shelf_service import feasibilize, ffdh, nfdh, nfih

ALGORITHMS = ("nfdh", "ffdh", "nfih", "ffds", "approx5322", "ptas", "exact")


@dataclass
class AlgorithmOptions:
    """Per-algorithm knobs gathered from the command line."""
    reorder: bool = False
    feasibilize: bool = False
    small_threshold: Fraction | None = None
    ptas: PtasParams = field(default_factory=PtasParams)
    limits: SearchLimits = field(default_factory=SearchLimits)
    ptas_limits: SearchLimits = PTAS_LIMITS


@dataclass
class SolveOutcome:
    """Result of one run; packing is None for an NFIH run left relaxed."""
    algo: str
    cost: int
    packing: Packing | None = None
    relaxed: RelaxedPacking | None = None
    approx_report: ApproxReport | None = None
    stage_report: StageReport | None = None


def _nfih(inst: Instance, options: AlgorithmOptions) -> SolveOutcome:
    threshold = options.small_threshold or max(inst.sizes, default=Fraction(1))
    q = nfih(inst.items, threshold)
    if not options.feasibilize:
        return SolveOutcome(algo="nfih", cost=cost(q), relaxed=q)
    p = feasibilize(q, options.ptas.eps, threshold=threshold)
    return SolveOutcome(algo="nfih", cost=cost(p), packing=p, relaxed=q)


def solve_with(algo: str, inst: Instance, options: AlgorithmOptions | None = None) -> SolveOutcome:
    """
    Run one algorithm on an instance.

    Raises:
        PreconditionError: For an unknown algorithm name or an algorithm outside its domain
    """
    options = options or AlgorithmOptions()
    if algo not in ALGORITHMS:
        raise PreconditionError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")

    if algo == "nfih":
        outcome = _nfih(inst, options)
    elif algo == "approx5322":
        packing, report = solve_53_22(inst)
        outcome = SolveOutcome(algo=algo, cost=report.cost, packing=packing, approx_report=report)
    elif algo == "ptas":
        packing, report = ptas_solve(inst, options.ptas, limits=options.ptas_limits)
        outcome = SolveOutcome(algo=algo, cost=cost(packing), packing=packing, stage_report=report)
    elif algo == "exact":
        packing, value = exact_min_sum(inst, options.limits)
        outcome = SolveOutcome(algo=algo, cost=value, packing=packing)
    else:
        heuristic = {"nfdh": nfdh, "ffdh": ffdh, "ffds": ffds_minsum}[algo]
        packing = heuristic(inst.items)
        if options.reorder:
            packing = reorder_bins_by_count(packing)
        outcome = SolveOutcome(algo=algo, cost=cost(packing), packing=packing)

    if outcome.packing is not None:
        ensure_feasible(outcome.packing, inst, algo)
    logger.info(f"Solved with {algo}: n={inst.n} cost={outcome.cost}")
    return outcome

