"""
Instance service - generators and the text formats for instances and packings.

Instance files: first line n, then n sizes as "p/q" (decimals accepted on input).
Packing files: first line m, then "item_id bin x y" per item with p/q coordinates.
"""
from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from sqpack.core.errors import InfeasiblePackingError, InstanceFormatError, PreconditionError
from sqpack.core.logger import logger
from sqpack.models.packing import Instance, Packing, Placement, Violation, format_rational, to_fraction
from sqpack.models.schemas import GeneratorSpec
from sqpack.services.packing_service import validate

THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)


# --- Generators ---

def gen_adversarial(t: int) -> Instance:
    """
    Instance on which shelf heuristics pay a factor growing with t.

    Args:
        t: Integer >= 3

    Returns:
        t*t items of size 1/t followed by t items of size 1 - 1/t

    Raises:
        PreconditionError: If t < 3
    """
    if t < 3:
        raise PreconditionError(f"adversarial family requires t >= 3, got {t}")
    small = Fraction(1, t)
    return Instance.from_sizes([small] * (t * t) + [1 - small] * t)


def _draw_sizes(rng: np.random.Generator, n: int, lo: Fraction, hi: Fraction, denominator: int) -> list[Fraction]:
    """n sizes k/denominator in (lo, hi]."""
    low = math.floor(lo * denominator) + 1
    high = math.floor(hi * denominator)
    if low > high:
        raise PreconditionError(
            f"no size with denominator {denominator} lies in ({lo}, {hi}]; raise max_denominator"
        )
    return [Fraction(int(k), denominator) for k in rng.integers(low, high + 1, size=n)]


_CLASS_BOUNDS = ((Fraction(0), THIRD), (THIRD, HALF), (HALF, Fraction(1)))


def gen_random(spec: GeneratorSpec) -> Instance:
    """
    Seeded random instance; the same spec always yields the same sizes.

    Args:
        spec: Random family (uniform, all_large, corner_mix) with n and seed

    Returns:
        Instance with sizes of denominator at most spec.max_denominator
    """
    rng = np.random.default_rng(spec.seed)
    denominator = spec.max_denominator
    n = spec.n or 0

    if spec.family == "uniform":
        sizes = _draw_sizes(rng, n, spec.lo, spec.hi, denominator)
    elif spec.family == "all_large":
        sizes = _draw_sizes(rng, n, spec.lo if spec.lo is not None else HALF, Fraction(1), denominator)
    elif spec.family == "corner_mix":
        classes = rng.integers(0, 3, size=n)
        sizes = [_draw_sizes(rng, 1, *_CLASS_BOUNDS[int(c)], denominator)[0] for c in classes]
    else:
        raise PreconditionError(f"{spec.family} is not a random family")

    logger.debug(f"Generated {spec.family} instance: n={n} seed={spec.seed}")
    return Instance.from_sizes(sizes)


def generate(spec: GeneratorSpec) -> Instance:
    """Dispatch on the generator family."""
    if spec.family == "adversarial":
        return gen_adversarial(spec.t)
    return gen_random(spec)


# --- Instance Format ---

def read_text(path: str | Path) -> str:
    """
    Read an instance or packing file; both formats are ASCII only.

    Raises:
        InstanceFormatError: On a non-ASCII byte, with its line number
        OSError: If the file cannot be read
    """
    data = Path(path).read_bytes()
    try:
        return data.decode("ascii")
    except UnicodeDecodeError as e:
        line = data[:e.start].count(b"\n") + 1
        raise InstanceFormatError(f"non-ASCII byte 0x{data[e.start]:02x} in {Path(path).name}", line) from e


def _lines(text: str) -> list[str]:
    lines = text.replace("\r\n", "\n").split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _parse_rational(token: str, line: int) -> Fraction:
    try:
        return to_fraction(token)
    except ValueError as e:
        raise InstanceFormatError(f"malformed rational {token!r}", line) from e


def parse_instance(text: str) -> Instance:
    """
    Parse instance text.

    Raises:
        InstanceFormatError: On a malformed line, a size outside (0, 1] or a count mismatch
    """
    lines = _lines(text)
    if not lines:
        raise InstanceFormatError("empty instance file", 1)
    try:
        n = int(lines[0].strip())
    except ValueError as e:
        raise InstanceFormatError(f"expected item count, got {lines[0]!r}", 1) from e
    if n < 0:
        raise InstanceFormatError(f"negative item count {n}", 1)
    if len(lines) - 1 != n:
        raise InstanceFormatError(f"header says {n} items, file has {len(lines) - 1}")

    sizes = []
    for offset, raw in enumerate(lines[1:], start=2):
        size = _parse_rational(raw.strip(), offset)
        if not 0 < size <= 1:
            raise InstanceFormatError(f"size {size} outside (0, 1]", offset)
        sizes.append(size)
    return Instance.from_sizes(sizes)


def serialize_instance(inst: Instance) -> str:
    lines = [str(inst.n)] + [format_rational(item.size) for item in inst.items]
    return "\n".join(lines) + "\n"


# --- Packing Format ---

def serialize_packing(p: Packing) -> str:
    lines = [str(p.num_bins)]
    for pl in sorted(p.placements, key=lambda pl: pl.item_id):
        lines.append(f"{pl.item_id} {pl.bin} {format_rational(pl.x)} {format_rational(pl.y)}")
    return "\n".join(lines) + "\n"


def parse_packing(text: str, inst: Instance) -> Packing:
    """
    Parse packing text against an instance and re-validate it.

    Raises:
        InstanceFormatError: On malformed lines or a wrong bin count header
        InfeasiblePackingError: If the packing violates any packing rule
    """
    lines = _lines(text)
    if not lines:
        raise InstanceFormatError("empty packing file", 1)
    try:
        m = int(lines[0].strip())
    except ValueError as e:
        raise InstanceFormatError(f"expected bin count, got {lines[0]!r}", 1) from e

    placements = []
    unknown = []
    for offset, raw in enumerate(lines[1:], start=2):
        fields = raw.split()
        if len(fields) != 4:
            raise InstanceFormatError(f"expected 'item_id bin x y', got {raw!r}", offset)
        try:
            item_id, bin_index = int(fields[0]), int(fields[1])
        except ValueError as e:
            raise InstanceFormatError(f"non-integer item id or bin in {raw!r}", offset) from e
        if not 0 <= item_id < inst.n:
            unknown.append(Violation(rule="unknown_item", item_ids=(item_id,), bin=bin_index))
            continue
        placements.append(Placement(
            item_id=item_id,
            bin=bin_index,
            x=_parse_rational(fields[2], offset),
            y=_parse_rational(fields[3], offset),
            size=inst.size_of(item_id),
        ))

    p = Packing(placements=tuple(placements))
    violations = unknown + validate(p, inst)
    if violations:
        raise InfeasiblePackingError(violations, "packing file")
    if m != p.num_bins:
        raise InstanceFormatError(f"header says {m} bins, placements use {p.num_bins}", 1)
    return p
