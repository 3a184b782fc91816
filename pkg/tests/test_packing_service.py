import itertools
from fractions import Fraction

import numpy as np
import pytest

from sqpack.core.errors import InfeasiblePackingError, PreconditionError
from sqpack.models.packing import Instance, OverflowLevel, Packing, Placement, RelaxedPacking
from sqpack.services.packing_service import (
    bin_counts,
    concat,
    cost,
    cost_of_items,
    ensure_feasible,
    find_overlaps,
    is_feasible,
    occupied_area,
    reorder_bins_by_count,
    shift_bins,
    substitute_sizes,
    validate,
)
from sqpack.services.shelf_service import nfdh

HALF = Fraction(1, 2)


def quarters(bin_index: int, ids: list[int]) -> list[Placement]:
    """Up to four half-size items in the corners of one bin."""
    corners = [(0, 0), (HALF, 0), (0, HALF), (HALF, HALF)]
    return [
        Placement(item_id=i, bin=bin_index, x=x, y=y, size=HALF)
        for i, (x, y) in zip(ids, corners)
    ]


@pytest.fixture
def halves() -> Instance:
    return Instance.from_sizes([HALF] * 6)


def test_cost_of_empty_packing():
    assert cost(Packing()) == 0


def test_cost_counts_bin_index_per_item(halves):
    p = Packing(placements=tuple(quarters(1, [0, 1, 2, 3]) + quarters(2, [4, 5])))
    assert cost(p) == 4 + 2 * 2
    assert cost_of_items(p, [4, 5]) == 4
    assert bin_counts(p) == [4, 2]
    assert is_feasible(p, halves)


def test_relaxed_cost_charges_the_bin_below():
    level = OverflowLevel(bin=1, index=0, height=HALF, placements=tuple(quarters(1, [4, 5])))
    q = RelaxedPacking(placements=tuple(quarters(1, [0, 1, 2, 3])), overflow=(level,))
    assert cost(q) == 6


def test_validate_reports_every_rule(halves):
    placements = (
        quarters(1, [0, 1])
        + [Placement(item_id=1, bin=1, x=0, y=HALF, size=HALF)]  # duplicate
        + [Placement(item_id=2, bin=1, x="1/4", y="1/4", size=HALF)]  # overlaps 0 and 1
        + [Placement(item_id=3, bin=3, x="3/4", y=0, size=HALF)]  # sticks out; bin 2 empty
        + [Placement(item_id=4, bin=3, x=0, y=0, size="1/3")]  # wrong size
        + [Placement(item_id=9, bin=3, x=0, y=HALF, size=HALF)]  # not in the instance
    )
    rules = {v.rule for v in validate(Packing(placements=tuple(placements)), halves)}
    assert rules == {
        "missing",
        "duplicate",
        "overlap",
        "out_of_bin",
        "empty_bin_gap",
        "size_mismatch",
        "unknown_item",
    }


def test_missing_item_named(halves):
    p = Packing(placements=tuple(quarters(1, [0, 1, 2, 3]) + quarters(2, [4])))
    violations = validate(p, halves)
    assert [(v.rule, v.item_ids) for v in violations] == [("missing", (5,))]


def test_bad_bin_index(halves):
    p = Packing(placements=tuple(quarters(1, [0, 1, 2, 3]) + quarters(0, [4, 5])))
    assert "bad_bin_index" in {v.rule for v in validate(p, halves)}


def test_ensure_feasible_raises_with_violations(halves):
    p = Packing(placements=tuple(quarters(1, [0, 1, 2, 3])))
    with pytest.raises(InfeasiblePackingError) as exc_info:
        ensure_feasible(p, halves, "test")
    assert len(exc_info.value.violations) == 2
    assert "infeasible test" in str(exc_info.value)


def test_find_overlaps_matches_pairwise_scan():
    inst = Instance.from_sizes(["1/3"] * 6)
    placements = [
        Placement(item_id=i, bin=1, x=Fraction(i, 6), y=Fraction(i % 2, 4), size="1/3")
        for i in range(inst.n)
    ]
    swept = {tuple(sorted((a.item_id, b.item_id))) for a, b in find_overlaps(placements)}
    pairwise = {
        (a.item_id, b.item_id)
        for a in placements
        for b in placements
        if a.item_id < b.item_id and a.overlaps(b)
    }
    assert swept == pairwise


def test_reorder_bins_by_count_is_stable():
    p = Packing(placements=tuple(quarters(1, [0]) + quarters(2, [1, 2, 3]) + quarters(3, [4, 5])))
    reordered = reorder_bins_by_count(p)
    assert bin_counts(reordered) == [3, 2, 1]
    assert reordered.bins == {1: {1, 2, 3}, 2: {4, 5}, 3: {0}}
    assert cost(reordered) < cost(p)


def test_reorder_keeps_already_sorted_packing():
    p = Packing(placements=tuple(quarters(1, [0, 1]) + quarters(2, [2, 3])))
    assert reorder_bins_by_count(p) is p


@pytest.mark.parametrize("seed", range(100))
def test_reorder_matches_best_bin_permutation(seed):
    rng = np.random.default_rng(seed)
    counts = [int(c) for c in rng.integers(1, 5, size=int(rng.integers(1, 7)))]
    placements, next_id = [], 0
    for bin_index, count in enumerate(counts, start=1):
        placements += quarters(bin_index, list(range(next_id, next_id + count)))
        next_id += count
    best = min(
        sum(index * count for index, count in enumerate(order, start=1))
        for order in itertools.permutations(counts)
    )
    assert cost(reorder_bins_by_count(Packing(placements=tuple(placements)))) == best


def test_shift_bins(halves):
    p = Packing(placements=tuple(quarters(1, [0, 1, 2])))
    assert cost(shift_bins(p, 2)) == cost(p) + 2 * 3
    with pytest.raises(PreconditionError):
        shift_bins(p, -1)


def test_occupied_area():
    p = Packing(placements=tuple(quarters(1, [0, 1, 2])))
    assert occupied_area(p, 1) == Fraction(3, 4)
    with pytest.raises(PreconditionError):
        occupied_area(p, 2)


def test_concat_places_suffix_after_prefix(halves):
    prefix = Packing(placements=tuple(quarters(1, [0, 1, 2, 3])))
    suffix = Packing(placements=tuple(quarters(1, [4, 5])))
    joined = concat(prefix, suffix)
    assert joined.bins == {1: {0, 1, 2, 3}, 2: {4, 5}}
    assert is_feasible(joined, halves)

    with pytest.raises(PreconditionError):
        concat(prefix, prefix)


def test_substitute_sizes_keeps_coordinates():
    inst = Instance.from_sizes(["1/2", "1/3"])
    p = nfdh(inst.items)
    shrunk = substitute_sizes(p, {0: Fraction(1, 4)})
    by_id = {pl.item_id: pl for pl in shrunk.placements}
    assert by_id[0].size == Fraction(1, 4)
    assert (by_id[0].x, by_id[0].y) == (0, 0)
    assert by_id[1].size == Fraction(1, 3)
