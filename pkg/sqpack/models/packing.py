"""
Pydantic models for items, instances and packings.

All sizes and coordinates are exact rationals (fractions.Fraction); bins are
indexed from 1, item ids from 0.
"""
from __future__ import annotations

from collections import defaultdict
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Annotated, Any, Iterable, Literal, Sequence

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)


def to_fraction(value: Any) -> Fraction:
    """Coerce int, str ("p/q", integer or finite decimal) or float into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # shortest repr, so 0.6 means 3/5 and not its binary expansion
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                return Fraction(text)
            return Fraction(Decimal(text))
        except (ValueError, ZeroDivisionError, OverflowError, InvalidOperation) as e:
            raise ValueError(f"not a rational: {value!r}") from e
    raise ValueError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Canonical p/q text, denominator always written."""
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(format_rational, return_type=str, when_used="json"),
]

_FROZEN = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# --- Instance Models ---

class Item(BaseModel):
    """A square item with an exact side length in (0, 1]."""
    model_config = _FROZEN

    id: int = Field(..., ge=0, description="0-based index within the instance")
    size: Rational = Field(..., description="Side length")

    @field_validator("size")
    @classmethod
    def _size_in_unit_interval(cls, v: Fraction) -> Fraction:
        if not 0 < v <= 1:
            raise ValueError(f"size {v} outside (0, 1]")
        return v

    @property
    def area(self) -> Fraction:
        return self.size * self.size


class Instance(BaseModel):
    """An ordered list of items whose ids are exactly 0..n-1."""
    model_config = _FROZEN

    items: tuple[Item, ...] = ()

    @model_validator(mode="after")
    def _ids_are_positions(self) -> Instance:
        for position, item in enumerate(self.items):
            if item.id != position:
                raise ValueError(f"item at position {position} has id {item.id}")
        return self

    @classmethod
    def from_sizes(cls, sizes: Iterable[Any]) -> Instance:
        return cls(items=tuple(Item(id=i, size=s) for i, s in enumerate(sizes)))

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def sizes(self) -> list[Fraction]:
        return [item.size for item in self.items]

    def size_of(self, item_id: int) -> Fraction:
        return self.items[item_id].size

    def area(self) -> Fraction:
        return sum((item.area for item in self.items), Fraction(0))

    def subset(self, ids: Iterable[int]) -> list[Item]:
        """Items for the given ids, ids preserved, in id order."""
        return [self.items[i] for i in sorted(ids)]


# --- Packing Models ---

class Placement(BaseModel):
    """One item at lower-left corner (x, y) of a bin.

    Containment and the bin range are checked by the validator, not here, so
    that a tampered file still yields a violation list.
    """
    model_config = _FROZEN

    item_id: int = Field(..., ge=0)
    bin: int
    x: Rational
    y: Rational
    size: Rational

    def overlaps(self, other: Placement) -> bool:
        """Open-rectangle intersection; shared edges do not count."""
        return (
            self.x < other.x + other.size
            and other.x < self.x + self.size
            and self.y < other.y + other.size
            and other.y < self.y + self.size
        )

    def inside_unit_square(self) -> bool:
        return self.x >= 0 and self.y >= 0 and self.x + self.size <= 1 and self.y + self.size <= 1


class Packing(BaseModel):
    """Placements of items into bins 1..m."""
    model_config = _FROZEN

    placements: tuple[Placement, ...] = ()

    @classmethod
    def from_bins(cls, bins: Sequence[Sequence[Placement]]) -> Packing:
        """Re-index an ordered list of bins as 1..len(bins)."""
        placements = []
        for index, content in enumerate(bins, start=1):
            for placement in content:
                if placement.bin != index:
                    placement = placement.model_copy(update={"bin": index})
                placements.append(placement)
        return cls(placements=tuple(placements))

    @property
    def num_bins(self) -> int:
        return max((p.bin for p in self.placements), default=0)

    @property
    def bins(self) -> dict[int, set[int]]:
        content: dict[int, set[int]] = defaultdict(set)
        for p in self.placements:
            content[p.bin].add(p.item_id)
        return dict(content)

    def bins_list(self) -> list[list[Placement]]:
        """Placements grouped by bin, index 0 holding bin 1."""
        grouped: list[list[Placement]] = [[] for _ in range(self.num_bins)]
        for p in self.placements:
            if p.bin >= 1:
                grouped[p.bin - 1].append(p)
        return grouped

    def item_ids(self) -> set[int]:
        return {p.item_id for p in self.placements}


class OverflowLevel(BaseModel):
    """A level stacked above a bin; placements use y relative to the level base."""
    model_config = _FROZEN

    bin: int = Field(..., ge=1, description="Bin the level sits above")
    index: int = Field(..., ge=0, le=3, description="Stack position above the bin")
    height: Rational
    placements: tuple[Placement, ...] = ()


class RelaxedPacking(BaseModel):
    """A packing plus at most four overflow levels per bin."""
    model_config = _FROZEN

    placements: tuple[Placement, ...] = ()
    overflow: tuple[OverflowLevel, ...] = ()

    @model_validator(mode="after")
    def _at_most_four_levels(self) -> RelaxedPacking:
        per_bin: dict[int, int] = defaultdict(int)
        for level in self.overflow:
            per_bin[level.bin] += 1
            if per_bin[level.bin] > 4:
                raise ValueError(f"bin {level.bin} has more than 4 overflow levels")
        return self

    @property
    def num_bins(self) -> int:
        in_bin = max((p.bin for p in self.placements), default=0)
        above = max((level.bin for level in self.overflow), default=0)
        return max(in_bin, above)

    def in_bin(self) -> Packing:
        return Packing(placements=self.placements)

    def overflow_placements(self) -> list[Placement]:
        return [p for level in self.overflow for p in level.placements]


class Violation(BaseModel):
    """A single broken packing rule."""
    model_config = _FROZEN

    rule: Literal[
        "missing",
        "duplicate",
        "unknown_item",
        "size_mismatch",
        "bad_bin_index",
        "out_of_bin",
        "overlap",
        "empty_bin_gap",
    ]
    item_ids: tuple[int, ...] = ()
    bin: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        ids = ",".join(str(i) for i in self.item_ids)
        where = f" bin {self.bin}" if self.bin is not None else ""
        text = f"{self.rule}[{ids}]{where}"
        if self.detail:
            text += f" {self.detail}"
        return text
