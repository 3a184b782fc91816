"""
Bounds service - size classes, area groups, lower bounds and the case
constants of the 53/22 analysis.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Literal, Sequence

from sqpack.core.logger import logger
from sqpack.models.packing import Instance, Item
from sqpack.models.schemas import CaseConstants, GroupPartition, KBStats
from sqpack.services.ffds_service import HALF, THIRD, ffds, ffds_minsum
from sqpack.services.packing_service import cost


def is_small(size: Fraction) -> bool:
    return size <= THIRD


def size_class(size: Fraction) -> Literal["small", "medium", "large"]:
    if size <= THIRD:
        return "small"
    if size <= HALF:
        return "medium"
    return "large"


def classify(inst: Instance) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Split item ids into (small, medium, large) by the 1/3 and 1/2 boundaries."""
    classes: dict[str, list[int]] = {"small": [], "medium": [], "large": []}
    for item in inst.items:
        classes[size_class(item.size)].append(item.id)
    return tuple(classes["small"]), tuple(classes["medium"]), tuple(classes["large"])


def medium_and_large(inst: Instance) -> list[Item]:
    return [item for item in inst.items if item.size > THIRD]


def build_groups(inst: Instance) -> GroupPartition:
    """
    Greedy groups over items sorted by non-decreasing size.

    A group closes as soon as its area exceeds 1; the last group may stay at
    area <= 1. r counts the leading closed groups made only of small items.
    """
    groups: list[tuple[int, ...]] = []
    current: list[int] = []
    area = Fraction(0)
    for item in sorted(inst.items, key=lambda it: (it.size, it.id)):
        current.append(item.id)
        area += item.area
        if area > 1:
            groups.append(tuple(current))
            current, area = [], Fraction(0)
    closed = len(groups)
    if current:
        groups.append(tuple(current))

    r = 0
    while r < closed and all(is_small(inst.size_of(i)) for i in groups[r]):
        r += 1
    small_tail = tuple(i for i in groups[r] if is_small(inst.size_of(i))) if r < len(groups) else ()
    R = sum((index + 1) * len(group) for index, group in enumerate(groups[:r])) + (r + 1) * len(small_tail)

    logger.debug(f"Built {len(groups)} groups: r={r} R={R}")
    return GroupPartition(groups=tuple(groups), r=r, small_tail=small_tail, R=R)


def lb1(gp: GroupPartition) -> int:
    """Sum of group index times group size; a lower bound on OPT."""
    return sum((index + 1) * len(group) for index, group in enumerate(gp.groups))


def lb2(gp: GroupPartition, inst: Instance) -> int:
    """R plus the optimal cost of the medium and large items alone."""
    return gp.R + cost(ffds_minsum(medium_and_large(inst)))


def kb_stats(inst: Instance) -> KBStats:
    """
    k: medium items plus large items sharing an FFDS bin with a medium item.
    b: large items alone in their FFDS bin.
    """
    k = b = 0
    for content in ffds(medium_and_large(inst)).bins_list():
        if any(pl.size <= HALF for pl in content):
            k += len(content)
        else:
            b += len(content)
    return KBStats(k=k, b=b)


def small_count(gp: GroupPartition) -> int:
    """s: number of small items, all of which sit in groups 1..r+1."""
    return sum(len(group) for group in gp.groups[:gp.r]) + len(gp.small_tail)


# --- Analysis polynomials ---

def refined_lb1_rhs(R: int, r: int, k: int, b: int) -> Fraction:
    """Right-hand side of the refined LB1 inequality, evaluated exactly."""
    return (
        R + r * k - 13 * r + Fraction(k * k, 18) - Fraction(17 * k, 18) + r * b
        + Fraction(k * b, 9) - Fraction(3 * b, 2) + 4 + Fraction(b * b, 8)
    )


def general_bound_rhs(R: int, r: int, k: int, b: int, denominator: Literal[22, 9] = 22) -> Fraction:
    """
    Upper bound on A - lb2 - (31/22)*lb1 in terms of R, r, k, b.

    The cross term 13r(k+b) is divided by 22 in the derivation and by 9 in
    the statement; both are exposed.
    """
    return (
        Fraction(-9 * R, 22) + Fraction(13 * r * (k + b), denominator) + Fraction(1319 * k, 396)
        + Fraction(181 * b, 44) + Fraction(403 * r, 22) - Fraction(31 * k * k, 396)
        - Fraction(31 * k * b, 198) - Fraction(62, 11) - Fraction(31 * b * b, 176)
    )


def _k_residual(k: int) -> Fraction:
    return Fraction(-14 * k * k, 495) + Fraction(11347 * k, 1980) + Fraction(295, 11)


def _b_residual(b: int) -> Fraction:
    return Fraction(-111 * b * b, 880) + Fraction(1433 * b, 220) + Fraction(295, 11)


def _r_residual(r: int | Fraction) -> Fraction:
    return -Fraction(45, 22) * r * r + 467 * r + 1113


def _first_integer_above(start: Fraction, accept) -> int:
    value = math.floor(start) + 1
    while not accept(value):
        value += 1
    return value


def derive_case_constants() -> CaseConstants:
    """
    Recompute the case-split constants from the residual polynomials.

    k_limit: first k past the peak of the k residual where the residual and
    the coefficient of b (-28k/495 + 1433/220) are both negative.
    b_limit: same for b with the coefficient of k (-28b/495 + 11347/1980).
    r_limit: first r past 467*11/45 where -45r^2/22 + 467r + 1113 < 0.
    """
    k_peak = Fraction(11347, 1980) * Fraction(495, 28)
    k_limit = _first_integer_above(
        k_peak, lambda k: _k_residual(k) < 0 and Fraction(-28 * k, 495) + Fraction(1433, 220) < 0
    )
    b_peak = Fraction(1433, 220) * Fraction(440, 111)
    b_limit = _first_integer_above(
        b_peak, lambda b: _b_residual(b) < 0 and Fraction(-28 * b, 495) + Fraction(11347, 1980) < 0
    )
    r_peak = Fraction(467 * 11, 45)
    r_limit = _first_integer_above(r_peak, lambda r: _r_residual(r) < 0)

    s_limit = math.ceil(Fraction(467 * r_limit + 1113) * Fraction(22, 9))
    c_limit = math.ceil(_r_residual(r_peak))
    return CaseConstants(
        k_limit=k_limit,
        b_limit=b_limit,
        r_limit=r_limit,
        s_limit=s_limit,
        n_limit=s_limit + k_limit + b_limit,
        c_limit=c_limit,
    )


CASE_CONSTANTS = derive_case_constants()


def analysis_case(r: int, k: int, b: int, s: int, constants: CaseConstants = CASE_CONSTANTS) -> Literal["large_kb", "large_s", "bounded_n"]:
    """Which branch of the worst-case analysis covers an instance."""
    if k >= constants.k_limit or b >= constants.b_limit:
        return "large_kb"
    if s >= constants.s_limit:
        return "large_s"
    return "bounded_n"


def lower_bounds(inst: Instance) -> dict:
    """Every bound quantity of an instance in one pass."""
    gp = build_groups(inst)
    kb = kb_stats(inst)
    s = small_count(gp)
    return {
        "n": inst.n,
        "q": gp.q,
        "lb1": lb1(gp),
        "lb2": lb2(gp, inst),
        "r": gp.r,
        "R": gp.R,
        "k": kb.k,
        "b": kb.b,
        "s": s,
        "refined_lb1_rhs": refined_lb1_rhs(gp.R, gp.r, kb.k, kb.b),
        "analysis_case": analysis_case(gp.r, kb.k, kb.b, s),
    }


def lb1_of_sizes(sizes: Sequence[Fraction]) -> int:
    """lb1 of a bare size multiset."""
    total = 0
    index = 1
    area = Fraction(0)
    for s in sorted(sizes):
        total += index
        area += s * s
        if area > 1:
            index += 1
            area = Fraction(0)
    return total
