from fractions import Fraction

import pytest

from sqpack.core.errors import PreconditionError
from sqpack.models.packing import Instance
from sqpack.services.exact_service import exact_min_sum
from sqpack.services.ffds_service import corner_position, corner_slots, ffds, ffds_minsum
from sqpack.services.packing_service import bin_counts, cost, ensure_feasible

from tests.helpers import random_instance


def test_ffds_example_bins(ffds_example):
    p = ensure_feasible(ffds(ffds_example.items), ffds_example)
    assert bin_counts(p) == [4, 1, 4]
    assert p.bins == {1: {1, 5, 6, 7}, 2: {0}, 3: {8, 2, 3, 4}}


def test_ffds_minsum_orders_by_count(ffds_example):
    p = ensure_feasible(ffds_minsum(ffds_example.items), ffds_example)
    assert bin_counts(p) == [4, 4, 1]
    assert cost(p) == 15


def test_big_items_sit_bottom_left(ffds_example):
    p = ffds(ffds_example.items)
    for pl in p.placements:
        if pl.size > Fraction(1, 2):
            assert (pl.x, pl.y) == (0, 0)


def test_ffds_rejects_small_items():
    inst = Instance.from_sizes(["1/2", "1/3"])
    with pytest.raises(PreconditionError):
        ffds(inst.items)


def test_only_large_items_one_per_bin():
    inst = Instance.from_sizes(["3/5", "3/5", "3/5"])
    p = ffds_minsum(inst.items)
    assert bin_counts(p) == [1, 1, 1]
    assert cost(p) == 6


@pytest.mark.parametrize("corner, expected", [
    ("BL", (0, 0)),
    ("BR", (Fraction(3, 5), 0)),
    ("TL", (0, Fraction(3, 5))),
    ("TR", (Fraction(3, 5), Fraction(3, 5))),
])
def test_corner_position(corner, expected):
    assert corner_position(corner, Fraction(2, 5)) == expected


def test_corner_slots(ffds_example):
    slots = corner_slots(ffds(ffds_example.items))
    assert len(slots) == 12
    lone = [slot for slot in slots if slot.bin == 2]
    assert [(slot.corner, slot.occupied_by) for slot in lone] == [
        ("BL", 0), ("BR", None), ("TL", None), ("TR", None)
    ]
    assert lone[1].capacity == Fraction(2, 5)
    assert all(slot.occupied_by is not None for slot in slots if slot.bin in (1, 3))


@pytest.mark.parametrize("seed", range(5))
def test_ffds_random_medium_and_large(seed):
    inst = random_instance("uniform", 40, seed=seed, lo="1/3", hi="1")
    p = ensure_feasible(ffds_minsum(inst.items), inst, "ffds")
    assert all(count <= 4 for count in bin_counts(p))
    assert bin_counts(p) == sorted(bin_counts(p), reverse=True)


@pytest.mark.slow
def test_ffds_minsum_is_optimal_without_small_items(oracle_limits):
    for seed in range(200):
        inst = random_instance("uniform", 1 + seed % 9, seed=seed, lo="1/3", hi="1", denominator=60)
        _, opt = exact_min_sum(inst, oracle_limits)
        assert cost(ffds_minsum(inst.items)) == opt, f"seed {seed}"
