"""
Packing service - cost, validation and bin transformations shared by all algorithms.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction
from typing import Iterable, Sequence

from sqpack.core.errors import InfeasiblePackingError, PreconditionError
from sqpack.models.packing import Instance, Packing, Placement, RelaxedPacking, Violation


def cost(p: Packing | RelaxedPacking) -> int:
    """
    Min-sum objective: the sum over items of their bin index.

    Items on overflow levels of a relaxed packing pay the index of the bin
    below them.
    """
    total = sum(pl.bin for pl in p.placements)
    if isinstance(p, RelaxedPacking):
        total += sum(pl.bin for pl in p.overflow_placements())
    return total


def cost_of_items(p: Packing, ids: Iterable[int]) -> int:
    """Cost restricted to a subset of item ids."""
    wanted = set(ids)
    return sum(pl.bin for pl in p.placements if pl.item_id in wanted)


def bin_counts(p: Packing) -> list[int]:
    """Item count of bins 1..m."""
    counts = [0] * p.num_bins
    for pl in p.placements:
        if pl.bin >= 1:
            counts[pl.bin - 1] += 1
    return counts


def find_overlaps(placements: Sequence[Placement]) -> list[tuple[Placement, Placement]]:
    """
    Every pair of placements in one bin whose interiors intersect.

    Sweeps by x so only pairs with overlapping x-intervals are compared; the
    predicate is the same open-rectangle test as a full pairwise scan.
    """
    ordered = sorted(placements, key=lambda pl: (pl.x, pl.y, pl.item_id))
    pairs = []
    for a_index, a in enumerate(ordered):
        right = a.x + a.size
        for b in ordered[a_index + 1:]:
            if b.x >= right:
                break
            if b.y < a.y + a.size and a.y < b.y + b.size:
                pairs.append((a, b))
    return pairs


def geometry_violations(placements: Sequence[Placement]) -> list[Violation]:
    """Containment, bin-range and overlap violations, ignoring instance membership."""
    violations = []
    per_bin: dict[int, list[Placement]] = defaultdict(list)
    for pl in placements:
        if pl.bin < 1:
            violations.append(Violation(rule="bad_bin_index", item_ids=(pl.item_id,), bin=pl.bin))
            continue
        if not pl.inside_unit_square():
            violations.append(Violation(
                rule="out_of_bin",
                item_ids=(pl.item_id,),
                bin=pl.bin,
                detail=f"at ({pl.x}, {pl.y}) size {pl.size}",
            ))
        per_bin[pl.bin].append(pl)

    for bin_index in sorted(per_bin):
        for a, b in find_overlaps(per_bin[bin_index]):
            pair = tuple(sorted((a.item_id, b.item_id)))
            violations.append(Violation(rule="overlap", item_ids=pair, bin=bin_index))
    return violations


def validate(p: Packing, inst: Instance) -> list[Violation]:
    """
    Check a packing against an instance.

    Args:
        p: Packing to check
        inst: Instance the packing claims to cover

    Returns:
        Violations found; an empty list means the packing is feasible
    """
    violations = []
    seen = Counter(pl.item_id for pl in p.placements)

    for item in inst.items:
        if seen[item.id] == 0:
            violations.append(Violation(rule="missing", item_ids=(item.id,)))
    for item_id, times in sorted(seen.items()):
        if item_id >= inst.n:
            violations.append(Violation(rule="unknown_item", item_ids=(item_id,)))
        elif times > 1:
            violations.append(Violation(rule="duplicate", item_ids=(item_id,), detail=f"placed {times} times"))

    for pl in p.placements:
        if pl.item_id < inst.n and pl.size != inst.size_of(pl.item_id):
            violations.append(Violation(
                rule="size_mismatch",
                item_ids=(pl.item_id,),
                bin=pl.bin,
                detail=f"placed with {pl.size}, instance says {inst.size_of(pl.item_id)}",
            ))

    violations.extend(geometry_violations(p.placements))

    used = {pl.bin for pl in p.placements if pl.bin >= 1}
    for bin_index in range(1, p.num_bins + 1):
        if bin_index not in used:
            violations.append(Violation(rule="empty_bin_gap", bin=bin_index, detail="empty bin below the last bin"))
    return violations


def is_feasible(p: Packing, inst: Instance) -> bool:
    return not validate(p, inst)


def ensure_feasible(p: Packing, inst: Instance, context: str = "packing") -> Packing:
    """Return p unchanged or raise InfeasiblePackingError listing every violation."""
    violations = validate(p, inst)
    if violations:
        raise InfeasiblePackingError(violations, context)
    return p


def reorder_bins_by_count(p: Packing) -> Packing:
    """Permute bins into non-increasing item count, ties kept in original order."""
    counts = bin_counts(p)
    order = sorted(range(1, p.num_bins + 1), key=lambda j: (-counts[j - 1], j))
    if order == list(range(1, p.num_bins + 1)):
        return p
    new_index = {old: new for new, old in enumerate(order, start=1)}
    return Packing(placements=tuple(
        pl.model_copy(update={"bin": new_index[pl.bin]}) for pl in p.placements
    ))


def shift_bins(p: Packing, d: int) -> Packing:
    """Raise every bin index by d; the cost grows by d per item."""
    if d < 0:
        raise PreconditionError(f"shift must be nonnegative, got {d}")
    if d == 0:
        return p
    return Packing(placements=tuple(pl.model_copy(update={"bin": pl.bin + d}) for pl in p.placements))


def occupied_area(p: Packing, bin_index: int) -> Fraction:
    """Exact sum of item areas in one bin."""
    if not 1 <= bin_index <= p.num_bins:
        raise PreconditionError(f"unknown bin {bin_index}; packing has bins 1..{p.num_bins}")
    return sum((pl.size * pl.size for pl in p.placements if pl.bin == bin_index), Fraction(0))


def concat(prefix: Packing, suffix: Packing) -> Packing:
    """Place the suffix bins after the prefix bins."""
    shared = prefix.item_ids() & suffix.item_ids()
    if shared:
        raise PreconditionError(f"concat of packings sharing items {sorted(shared)[:10]}")
    shifted = shift_bins(suffix, prefix.num_bins)
    return Packing(placements=prefix.placements + shifted.placements)


def concat_all(parts: Iterable[Packing]) -> Packing:
    result = Packing()
    for part in parts:
        result = concat(result, part)
    return result


def substitute_sizes(p: Packing, sizes: dict[int, Fraction]) -> Packing:
    """Same coordinates, new sizes for the given item ids."""
    return Packing(placements=tuple(
        pl.model_copy(update={"size": sizes[pl.item_id]}) if pl.item_id in sizes else pl
        for pl in p.placements
    ))
