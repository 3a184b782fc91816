"""
Approx service - the 53/22-approximation and its empirical ratio suite.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import pandas as pd

from sqpack.core.errors import BudgetExceededError
from sqpack.core.logger import logger
from sqpack.models.packing import Instance, Packing
from sqpack.models.schemas import ApproxReport, SearchLimits
from sqpack.services.bounds_service import (
    CASE_CONSTANTS,
    analysis_case,
    build_groups,
    general_bound_rhs,
    is_small,
    kb_stats,
    lb1,
    medium_and_large,
    refined_lb1_rhs,
    small_count,
)
from sqpack.services.exact_service import exact_min_sum
from sqpack.services.ffds_service import ffds_minsum
from sqpack.services.packing_service import concat, concat_all, cost, ensure_feasible
from sqpack.services.shelf_service import nfdh

RATIO_COLUMNS = [
    "instance_id",
    "n",
    "cost",
    "lb1",
    "lb2",
    "opt_or_blank",
    "ratio_vs_lb",
    "ratio_vs_opt_or_blank",
]

APPROX_RATIO = Fraction(53, 22)
LB1_WEIGHT = Fraction(31, 22)


def _ratio(value: int, reference: int) -> Fraction:
    return Fraction(value, reference) if reference else Fraction(1)


def solve_53_22(inst: Instance) -> tuple[Packing, ApproxReport]:
    """
    Run the 53/22-approximation.

    Small items of groups 1..r and the small items of group r+1 are NFDH
    packed, each group into fresh bins, groups in index order. The medium and
    large items follow as an FFDS packing ordered by non-increasing bin count.

    Args:
        inst: Instance to pack

    Returns:
        (feasible packing, report tying its cost to the lower bounds)
    """
    gp = build_groups(inst)
    small_groups = [
        [i for i in group if is_small(inst.size_of(i))] for group in gp.groups[:gp.r]
    ] + [list(gp.small_tail)]
    small_packing = concat_all(nfdh(inst.subset(ids)) for ids in small_groups if ids)
    ffds_part = ffds_minsum(medium_and_large(inst))
    packing = ensure_feasible(concat(small_packing, ffds_part), inst, "approx5322")

    total = cost(packing)
    ffds_cost = cost(ffds_part)
    kb = kb_stats(inst)
    lower1 = lb1(gp)
    lower2 = gp.R + ffds_cost
    small_bins = small_packing.num_bins
    s = small_count(gp)

    report = ApproxReport(
        cost=total,
        lb1=lower1,
        lb2=lower2,
        r=gp.r,
        k=kb.k,
        b=kb.b,
        s=s,
        R=gp.R,
        small_bins=small_bins,
        small_cost=cost(small_packing),
        ffds_cost=ffds_cost,
        upper_bound_2R_plus_ffds=2 * gp.R + ffds_cost + (kb.k + kb.b) * (2 * gp.r + 2),
        whole_bound=2 * gp.R + ffds_cost + (kb.k + kb.b) * small_bins,
        ratio_vs_max_lb=_ratio(total, max(lower1, lower2)),
        refined_lb1_rhs=refined_lb1_rhs(gp.R, gp.r, kb.k, kb.b),
        general_bound_lhs=total - lower2 - LB1_WEIGHT * lower1,
        general_bound_rhs_22=general_bound_rhs(gp.R, gp.r, kb.k, kb.b, 22),
        general_bound_rhs_9=general_bound_rhs(gp.R, gp.r, kb.k, kb.b, 9),
        cost_bound_rhs=LB1_WEIGHT * lower1 + lower2 + CASE_CONSTANTS.c_limit,
        analysis_case=analysis_case(gp.r, kb.k, kb.b, s),
    )
    logger.info(
        f"approx5322: n={inst.n} bins={packing.num_bins} cost={total} "
        f"lb1={lower1} lb2={lower2} r={gp.r} small_bins={small_bins}"
    )
    return packing, report


# --- Ratio Suite ---

def empirical_ratio_suite(
    corpus: Sequence[Instance],
    names: Sequence[str] | None = None,
    limits: SearchLimits | None = None,
    with_opt: bool = True,
) -> pd.DataFrame:
    """
    Run the approximation over a corpus, comparing against lower bounds and,
    for instances small enough, the exact optimum.

    Args:
        corpus: Instances to evaluate
        names: instance_id per instance; positions when omitted
        limits: Oracle limits; instances above max_items get a blank optimum
        with_opt: Whether to call the exact oracle at all

    Returns:
        DataFrame with RATIO_COLUMNS, exact Fractions in the ratio columns
    """
    limits = limits or SearchLimits()
    rows = []
    for index, inst in enumerate(corpus):
        _, report = solve_53_22(inst)
        opt = None
        if with_opt and inst.n <= limits.max_items:
            try:
                _, opt = exact_min_sum(inst, limits)
            except BudgetExceededError as e:
                logger.warning(f"No optimum for instance {index}: {e}")
        rows.append({
            "instance_id": names[index] if names is not None else str(index),
            "n": inst.n,
            "cost": report.cost,
            "lb1": report.lb1,
            "lb2": report.lb2,
            "opt_or_blank": opt,
            "ratio_vs_lb": report.ratio_vs_max_lb,
            "ratio_vs_opt_or_blank": _ratio(report.cost, opt) if opt is not None else None,
        })
    return pd.DataFrame(rows, columns=RATIO_COLUMNS, dtype=object)


def summarize_ratios(df: pd.DataFrame) -> dict:
    """Instance count, maximum ratios and whether every known optimum ratio is within 53/22."""
    opt_ratios = [v for v in df["ratio_vs_opt_or_blank"] if v is not None and not pd.isna(v)]
    return {
        "instances": len(df),
        "max_ratio_vs_lb": max(df["ratio_vs_lb"], default=None),
        "max_ratio_vs_opt": max(opt_ratios, default=None),
        "within_53_22": all(v <= APPROX_RATIO for v in opt_ratios),
    }


def _blank_or(value, fmt: str = "{}") -> str:
    if value is None or pd.isna(value):
        return ""
    return fmt.format(value)


def ratio_suite_csv(df: pd.DataFrame) -> str:
    """CSV text of a ratio suite; ratios as six-decimal floats, blanks for missing optima."""
    out = df.copy()
    out["opt_or_blank"] = out["opt_or_blank"].map(_blank_or)
    for column in ("ratio_vs_lb", "ratio_vs_opt_or_blank"):
        out[column] = out[column].map(lambda v: _blank_or(None if v is None else float(v), "{:.6f}"))
    return out.to_csv(index=False, lineterminator="\n")
