"""
FFDS service - First Fit Decreasing Size for squares larger than 1/3.

Every bin holds at most four items, one per corner. Bins opened by a big item
(> 1/2) keep it in the bottom-left corner and offer the other three corners
to items no larger than 1 - (big size).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from sqpack.core.errors import PreconditionError
from sqpack.core.logger import logger
from sqpack.models.packing import Item, Packing, Placement
from sqpack.services.packing_service import reorder_bins_by_count

THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)

Corner = Literal["BL", "BR", "TL", "TR"]


@dataclass
class CornerSlot:
    """A free corner of an opened bin."""
    bin: int
    corner: Corner
    capacity: Fraction
    occupied_by: int | None = None


@dataclass
class _OpenBin:
    index: int
    capacity: Fraction
    free: list[Corner] = field(default_factory=list)


def corner_position(corner: Corner, s: Fraction) -> tuple[Fraction, Fraction]:
    """Lower-left coordinates of a square of side s pushed into a corner."""
    x = 1 - s if corner in ("BR", "TR") else Fraction(0)
    y = 1 - s if corner in ("TL", "TR") else Fraction(0)
    return x, y


def ffds(items: Sequence[Item]) -> Packing:
    """
    Pack items of size > 1/3 with First Fit Decreasing Size.

    Big items, in non-decreasing size order, each open a bin at bottom-left.
    The remaining items, in non-increasing size order, go three at a time into
    the first bin whose free corners admit the first of them; when none does,
    a new bin takes the next four.

    Raises:
        PreconditionError: If any size is at most 1/3
    """
    small = [it.id for it in items if it.size <= THIRD]
    if small:
        raise PreconditionError(f"FFDS needs sizes > 1/3; items {small[:10]} are not")

    big = sorted((it for it in items if it.size > HALF), key=lambda it: (it.size, it.id))
    rest = sorted((it for it in items if it.size <= HALF), key=lambda it: (-it.size, it.id))

    placements = []
    bins: list[_OpenBin] = []
    for item in big:
        bins.append(_OpenBin(index=len(bins) + 1, capacity=1 - item.size, free=["BR", "TL", "TR"]))
        placements.append(Placement(item_id=item.id, bin=len(bins), x=0, y=0, size=item.size))

    queue = list(rest)
    while queue:
        first = queue[0]
        target = next((b for b in bins if b.free and first.size <= b.capacity), None)
        if target is None:
            target = _OpenBin(index=len(bins) + 1, capacity=HALF, free=["BL", "BR", "TL", "TR"])
            bins.append(target)
        take, queue = queue[:len(target.free)], queue[len(target.free):]
        for item in take:
            corner = target.free.pop(0)
            x, y = corner_position(corner, item.size)
            placements.append(Placement(item_id=item.id, bin=target.index, x=x, y=y, size=item.size))

    logger.debug(f"FFDS packed {len(placements)} items into {len(bins)} bins")
    return Packing(placements=tuple(placements))


def ffds_minsum(items: Sequence[Item]) -> Packing:
    """FFDS followed by ordering bins by non-increasing item count."""
    return reorder_bins_by_count(ffds(items))


def corner_slots(p: Packing) -> list[CornerSlot]:
    """Corner occupancy of an FFDS packing, four slots per bin."""
    slots = []
    for index, content in enumerate(p.bins_list(), start=1):
        big = next((pl.size for pl in content if pl.size > HALF), None)
        capacity = 1 - big if big is not None else HALF
        for corner in ("BL", "BR", "TL", "TR"):
            occupant = next(
                (pl.item_id for pl in content if (pl.x, pl.y) == corner_position(corner, pl.size)
                 and (pl.size > HALF) == (corner == "BL" and big is not None)),
                None,
            )
            slots.append(CornerSlot(
                bin=index,
                corner=corner,
                capacity=big if corner == "BL" and big is not None else capacity,
                occupied_by=occupant,
            ))
    return slots
