from fractions import Fraction

import pytest
from pydantic import ValidationError

from sqpack.models.packing import (
    Instance,
    Item,
    OverflowLevel,
    Placement,
    RelaxedPacking,
    Violation,
    format_rational,
    to_fraction,
)


@pytest.mark.parametrize("value, expected", [
    ("3/5", Fraction(3, 5)),
    ("6/10", Fraction(3, 5)),
    ("0.6", Fraction(3, 5)),
    (0.6, Fraction(3, 5)),
    (1, Fraction(1)),
    (" 1/4 ", Fraction(1, 4)),
])
def test_to_fraction_is_exact(value, expected):
    assert to_fraction(value) == expected


@pytest.mark.parametrize("value", ["abc", "1/0", "", True, None])
def test_to_fraction_rejects_non_rationals(value):
    with pytest.raises(ValueError):
        to_fraction(value)


def test_format_rational_always_writes_denominator():
    assert format_rational(Fraction(1)) == "1/1"
    assert format_rational(Fraction(6, 10)) == "3/5"


@pytest.mark.parametrize("size", ["0", "-1/2", "11/10"])
def test_item_size_outside_unit_interval(size):
    with pytest.raises(ValidationError):
        Item(id=0, size=size)


def test_instance_ids_must_match_positions():
    with pytest.raises(ValidationError):
        Instance(items=(Item(id=1, size="1/2"),))


def test_instance_helpers():
    inst = Instance.from_sizes(["1/2", "1/3", "1/4"])
    assert inst.n == 3
    assert inst.sizes == [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]
    assert inst.area() == Fraction(1, 4) + Fraction(1, 9) + Fraction(1, 16)
    assert [item.id for item in inst.subset([2, 0])] == [0, 2]


def test_rationals_serialize_as_text():
    dumped = Item(id=0, size="0.6").model_dump(mode="json")
    assert dumped == {"id": 0, "size": "3/5"}


def test_shared_edges_do_not_overlap():
    a = Placement(item_id=0, bin=1, x=0, y=0, size="1/2")
    b = Placement(item_id=1, bin=1, x="1/2", y=0, size="1/2")
    c = Placement(item_id=2, bin=1, x="1/4", y="1/4", size="1/2")
    assert not a.overlaps(b)
    assert a.overlaps(c)
    assert b.overlaps(c)


def test_inside_unit_square():
    assert Placement(item_id=0, bin=1, x="1/2", y="1/2", size="1/2").inside_unit_square()
    assert not Placement(item_id=0, bin=1, x="3/5", y=0, size="1/2").inside_unit_square()


def test_relaxed_packing_allows_four_levels_per_bin():
    levels = tuple(OverflowLevel(bin=1, index=i, height="1/8") for i in range(4))
    assert RelaxedPacking(overflow=levels).num_bins == 1

    with pytest.raises(ValidationError):
        OverflowLevel(bin=1, index=4, height="1/8")


def test_relaxed_packing_rejects_a_fifth_level():
    levels = tuple(OverflowLevel(bin=2, index=i % 4, height="1/8") for i in range(5))
    with pytest.raises(ValidationError):
        RelaxedPacking(overflow=levels)


def test_violation_text():
    violation = Violation(rule="overlap", item_ids=(1, 4), bin=2)
    assert str(violation) == "overlap[1,4] bin 2"
