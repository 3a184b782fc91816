"""
Shelf service - level heuristics NFDH, FFDH and NFIH, and the transformation
that turns an NFIH relaxed packing into a feasible one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sqpack.core.errors import InvariantError, PreconditionError
from sqpack.core.logger import logger
from sqpack.models.packing import Item, OverflowLevel, Packing, Placement, RelaxedPacking

NINE_SIXTEENTHS = Fraction(9, 16)


@dataclass
class Shelf:
    """A level of a bin under construction."""
    bin: int
    y_base: Fraction
    height: Fraction
    cursor_x: Fraction = Fraction(0)


def _decreasing(items: Sequence[Item]) -> list[Item]:
    return sorted(items, key=lambda it: (-it.size, it.id))


def nfdh(items: Sequence[Item]) -> Packing:
    """
    Next Fit Decreasing Height.

    Items in non-increasing size order fill the current shelf left to right;
    a new shelf opens on top when the item does not fit, a new bin when the
    shelf would cross the bin top. Closed shelves and bins are never revisited.
    """
    placements = []
    shelf: Shelf | None = None
    for item in _decreasing(items):
        s = item.size
        if shelf is None:
            shelf = Shelf(bin=1, y_base=Fraction(0), height=s)
        elif shelf.cursor_x + s > 1:
            top = shelf.y_base + shelf.height
            if top + s <= 1:
                shelf = Shelf(bin=shelf.bin, y_base=top, height=s)
            else:
                shelf = Shelf(bin=shelf.bin + 1, y_base=Fraction(0), height=s)
        placements.append(Placement(item_id=item.id, bin=shelf.bin, x=shelf.cursor_x, y=shelf.y_base, size=s))
        shelf.cursor_x += s

    logger.debug(f"NFDH packed {len(placements)} items into {shelf.bin if shelf else 0} bins")
    return Packing(placements=tuple(placements))


def ffdh(items: Sequence[Item]) -> Packing:
    """
    First Fit Decreasing Height.

    Each item goes to the first shelf (by bin, then creation) with room on its
    right; otherwise a new shelf opens in the first bin with room on top;
    otherwise a new bin opens.
    """
    placements = []
    shelves: list[Shelf] = []
    bin_tops: list[Fraction] = []
    for item in _decreasing(items):
        s = item.size
        target = next((sh for sh in shelves if sh.cursor_x + s <= 1 and s <= sh.height), None)
        if target is None:
            bin_index = next((j for j, top in enumerate(bin_tops, start=1) if top + s <= 1), None)
            if bin_index is None:
                bin_tops.append(Fraction(0))
                bin_index = len(bin_tops)
            target = Shelf(bin=bin_index, y_base=bin_tops[bin_index - 1], height=s)
            bin_tops[bin_index - 1] += s
            shelves.append(target)
            shelves.sort(key=lambda sh: (sh.bin, sh.y_base))
        placements.append(Placement(item_id=item.id, bin=target.bin, x=target.cursor_x, y=target.y_base, size=s))
        target.cursor_x += s

    logger.debug(f"FFDH packed {len(placements)} items into {len(bin_tops)} bins")
    return Packing(placements=tuple(placements))


def nfih(items: Sequence[Item], max_size: Fraction) -> RelaxedPacking:
    """
    Next Fit Increasing Height with overflow levels.

    Items in non-decreasing size order fill levels whose height is the size of
    the last item placed on them. Once no level fits inside the bin, up to four
    levels are stacked above it; the fifth opens the next bin. Items above a
    bin cost that bin's index.

    Args:
        items: Items to pack
        max_size: Upper bound on every size

    Returns:
        Relaxed packing with in-bin placements and overflow levels

    Raises:
        PreconditionError: If an item exceeds max_size
    """
    too_big = [it.id for it in items if it.size > max_size]
    if too_big:
        raise PreconditionError(f"items {too_big[:10]} exceed the NFIH threshold {max_size}")

    in_bin: list[Placement] = []
    levels: list[OverflowLevel] = []

    bin_index = 0
    y_base = cursor = height = Fraction(0)
    above: list[Placement] | None = None  # open overflow level, None while packing inside
    above_count = 0

    def close_overflow_level() -> None:
        if above:
            levels.append(OverflowLevel(bin=bin_index, index=above_count - 1, height=height, placements=tuple(above)))

    for item in sorted(items, key=lambda it: (it.size, it.id)):
        s = item.size
        if bin_index == 0:
            bin_index = 1
        elif cursor + s <= 1 and (above is not None or y_base + s <= 1):
            pass
        elif above is None and y_base + height + s <= 1:
            y_base, cursor = y_base + height, Fraction(0)
        elif above_count < 4:
            close_overflow_level()
            above, cursor = [], Fraction(0)
            above_count += 1
        else:
            close_overflow_level()
            bin_index += 1
            y_base = cursor = Fraction(0)
            above, above_count = None, 0

        placement = Placement(item_id=item.id, bin=bin_index, x=cursor, y=y_base if above is None else Fraction(0), size=s)
        if above is None:
            in_bin.append(placement)
        else:
            above.append(placement)
        cursor += s
        height = s
    close_overflow_level()

    logger.debug(f"NFIH packed {len(items)} items: {bin_index} bins, {len(levels)} overflow levels")
    return RelaxedPacking(placements=tuple(in_bin), overflow=tuple(levels))


def feasibilize(
    q: RelaxedPacking,
    eps: Fraction,
    p_exp: int | None = None,
    threshold: Fraction | None = None,
) -> Packing:
    """
    Move the overflow levels of an NFIH packing into new bins.

    Bins are cut into blocks of max(1, floor(1/(4*tau))) bins, tau being the
    small threshold (eps**(p_exp+3), or `threshold` when given). Each block
    with overflow gets one new bin holding its levels stacked bottom-up (more
    than one only when tau > 1/4): at position 1/eps for the first block
    (after the block when it is shorter), at the start of the block for the
    others.

    Raises:
        PreconditionError: If neither p_exp nor threshold is given, or 1/eps is not an integer
        InvariantError: If an overflow level is taller than a bin
    """
    if eps.numerator != 1:
        raise PreconditionError(f"1/eps must be an integer, got eps={eps}")
    if threshold is None:
        if p_exp is None:
            raise PreconditionError("feasibilize needs p_exp or an explicit threshold")
        threshold = eps ** (p_exp + 3)
    if not q.overflow:
        return q.in_bin()

    block = max(1, math.floor(1 / (4 * threshold)))
    old_bins = q.in_bin().bins_list()
    old_bins += [[] for _ in range(q.num_bins - len(old_bins))]

    levels_by_block: dict[int, list[OverflowLevel]] = {}
    for level in sorted(q.overflow, key=lambda lv: (lv.bin, lv.index)):
        levels_by_block.setdefault((level.bin - 1) // block, []).append(level)

    ordered: list[list[Placement]] = []
    opened = 0
    for k in range((len(old_bins) + block - 1) // block):
        members = old_bins[k * block:(k + 1) * block]
        levels = levels_by_block.get(k)
        if not levels:
            ordered.extend(members)
            continue
        new_bins = _stack_levels(levels)
        opened += len(new_bins)
        if k == 0:
            position = min(eps.denominator, len(members) + 1)
            ordered.extend(members[:position - 1] + new_bins + members[position - 1:])
        else:
            ordered.extend(new_bins + members)

    moved = sum(len(lv.placements) for lv in q.overflow)
    logger.debug(f"Feasibilize moved {moved} items into {opened} new bins (block size {block})")
    return Packing.from_bins(ordered)


def _stack_levels(levels: Sequence[OverflowLevel]) -> list[list[Placement]]:
    # a block of floor(1/(4*tau)) bins fits in one new bin; tau > 1/4 spills into more
    bins: list[list[Placement]] = [[]]
    y = Fraction(0)
    for level in levels:
        if level.height > 1:
            raise InvariantError(f"overflow level {level.index} of bin {level.bin} is taller than a bin")
        if y + level.height > 1:
            bins.append([])
            y = Fraction(0)
        bins[-1].extend(pl.model_copy(update={"y": y + pl.y}) for pl in level.placements)
        y += level.height
    return bins


# --- Fill measurements ---

def nfdh_fill_profile(p: Packing) -> list[dict]:
    """
    Occupied area per bin next to both readings of the NFDH waste bound.

    The area reading uses 1 - 2*(largest item area); the size reading uses
    1 - 2*(largest item size).
    """
    rows = []
    for index, content in enumerate(p.bins_list(), start=1):
        largest = max((pl.size for pl in content), default=Fraction(0))
        rows.append({
            "bin": index,
            "occupied": sum((pl.size * pl.size for pl in content), Fraction(0)),
            "area_reading": 1 - 2 * largest * largest,
            "size_reading": 1 - 2 * largest,
        })
    return rows


def nfih_area_profile(q: RelaxedPacking) -> list[Fraction]:
    """area(Q_j) for bins 1..m, counting items on overflow levels."""
    areas = [Fraction(0)] * q.num_bins
    for pl in list(q.placements) + q.overflow_placements():
        areas[pl.bin - 1] += pl.size * pl.size
    return areas
