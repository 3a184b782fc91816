"""Helpers shared by test modules."""
from fractions import Fraction

import numpy as np

from sqpack.models.packing import Instance
from sqpack.models.schemas import GeneratorSpec
from sqpack.services.exact_service import fits_in_unit_bin
from sqpack.services.instance_service import gen_random


def random_instance(family: str, n: int, seed: int, lo=None, hi=None, denominator: int = 1000) -> Instance:
    """Seeded instance with small denominators so the exact oracle stays fast."""
    return gen_random(GeneratorSpec(
        family=family,
        n=n,
        lo=Fraction(lo) if lo is not None else None,
        hi=Fraction(hi) if hi is not None else None,
        seed=seed,
        max_denominator=denominator,
    ))


def set_partitions(items: list):
    """Every partition of a list into non-empty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for index in range(len(partition)):
            yield partition[:index] + [[first] + partition[index]] + partition[index + 1:]


def brute_force_min_sum(inst: Instance) -> int:
    """Optimal cost by trying every set partition, largest blocks first."""
    best = None
    for partition in set_partitions(list(inst.sizes)):
        if not all(fits_in_unit_bin(block).feasible for block in partition):
            continue
        counts = sorted((len(block) for block in partition), reverse=True)
        value = sum(index * count for index, count in enumerate(counts, start=1))
        if best is None or value < best:
            best = value
    return best


def bottom_left_fits(sizes: list[Fraction], seed: int, tries: int = 50) -> bool:
    """
    Randomized bottom-left placement: shuffle the squares, put each at the
    lowest then leftmost free corner point. True when some order fits one bin.
    """
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        order = [sizes[i] for i in rng.permutation(len(sizes))]
        placed: list[tuple[Fraction, Fraction, Fraction]] = []
        for s in order:
            xs = {Fraction(0)} | {x + t for t, x, _ in placed}
            ys = {Fraction(0)} | {y + t for t, _, y in placed}
            spots = sorted(
                (y, x) for y in ys for x in xs
                if x + s <= 1 and y + s <= 1
                and all(x >= u + t or u >= x + s or y >= v + t or v >= y + s for t, u, v in placed)
            )
            if not spots:
                break
            y, x = spots[0]
            placed.append((s, x, y))
        else:
            return True
    return False
