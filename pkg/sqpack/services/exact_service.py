"""
Exact service - one-bin feasibility of a square multiset and the exact
min-sum oracle for tiny instances.

One-bin search: every feasible packing can be pushed left and down until each
item is blocked, after which each coordinate of an item is a sum of sizes of
other items (a normal pattern). Searching positions drawn from those sums is
therefore complete.

Min-sum search: bins are chosen one configuration (multiset of sizes that fits
one bin) at a time. Some optimal solution has non-increasing bin counts, so a
bin may hold no more items than the one before it, and among equal-count
neighbours configurations appear in non-increasing order.
"""
from __future__ import annotations

import math
import time
from collections import OrderedDict
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from sqpack.core.errors import BudgetExceededError, PreconditionError
from sqpack.core.logger import logger
from sqpack.models.packing import Instance, Item, Packing, Placement, to_fraction
from sqpack.models.schemas import FeasibilityCertificate, SearchLimits
from sqpack.services.bounds_service import lb1_of_sizes
from sqpack.services.packing_service import cost
from sqpack.services.shelf_service import nfdh

Config = tuple[int, ...]

FIT_CACHE_SIZE = 65_536

# verdicts keyed by the non-increasing size tuple; certificates are stored in that order.
# Least recently used entries are dropped past FIT_CACHE_SIZE.
_FIT_CACHE: OrderedDict[tuple[Fraction, ...], tuple[tuple[Fraction, Fraction, Fraction], ...] | None] = OrderedDict()


class SearchBudget:
    """Node and wall-clock budget shared by one oracle call."""

    def __init__(self, limits: SearchLimits):
        self.limits = limits
        self.nodes = 0
        self.deadline = time.monotonic() + limits.time_budget

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limits.node_budget:
            raise BudgetExceededError(f"node budget of {self.limits.node_budget} exceeded")
        if self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceededError(f"time budget of {self.limits.time_budget}s exceeded")


def clear_fit_cache() -> None:
    _FIT_CACHE.clear()


def fit_cache_size() -> int:
    return len(_FIT_CACHE)


# --- One-bin feasibility ---

def subset_sums(sizes: Iterable[Fraction], cap: Fraction) -> list[Fraction]:
    """All sums of sub-multisets of sizes not exceeding cap, ascending."""
    sums = {Fraction(0)}
    for s in sizes:
        sums |= {t + s for t in sums if t + s <= cap}
    return sorted(sums)


def _quick_infeasible(key: Sequence[Fraction]) -> str | None:
    if sum(s * s for s in key) > 1:
        return "area"
    if len(key) >= 2 and key[0] + key[1] > 1:
        return "two largest"
    # squares larger than 1/k each contain a distinct interior point of the (k-1)x(k-1) grid
    for k in range(2, len(key) + 2):
        larger = sum(1 for s in key if s * k > 1)
        if larger > (k - 1) ** 2:
            return f"more than {(k - 1) ** 2} items above 1/{k}"
    return None


def _shelf_attempt(key: Sequence[Fraction]) -> tuple[tuple[Fraction, Fraction, Fraction], ...] | None:
    packed = nfdh([Item(id=i, size=s) for i, s in enumerate(key)])
    if packed.num_bins > 1:
        return None
    by_id = {pl.item_id: pl for pl in packed.placements}
    return tuple((key[i], by_id[i].x, by_id[i].y) for i in range(len(key)))


def _search(key: Sequence[Fraction], budget: SearchBudget) -> tuple[tuple[Fraction, Fraction, Fraction], ...] | None:
    n = len(key)
    patterns: dict[Fraction, list[Fraction]] = {}
    for index, s in enumerate(key):
        if s not in patterns:
            others = list(key[:index]) + list(key[index + 1:])
            patterns[s] = subset_sums(others, 1 - s)
    first_unique = n == 1 or key[0] != key[1]
    placed: list[tuple[Fraction, Fraction, Fraction]] = []

    def fits_here(s: Fraction, x: Fraction, y: Fraction) -> bool:
        for t, u, v in placed:
            if x < u + t and u < x + s and y < v + t and v < y + s:
                return False
        return True

    def place(i: int) -> bool:
        budget.tick()
        if i == n:
            return True
        s = key[i]
        previous = placed[-1] if i > 0 and key[i - 1] == s else None
        for y in patterns[s]:
            if i == 0 and first_unique and 2 * y + s > 1:
                break
            for x in patterns[s]:
                if i == 0 and first_unique and 2 * x + s > 1:
                    break
                if previous is not None and (y, x) <= (previous[2], previous[1]):
                    continue
                if not fits_here(s, x, y):
                    continue
                placed.append((s, x, y))
                if place(i + 1):
                    return True
                placed.pop()
        return False

    return tuple(placed) if place(0) else None


def fits_in_unit_bin(
    sizes: Iterable,
    limits: SearchLimits | None = None,
    use_cache: bool = True,
    budget: SearchBudget | None = None,
) -> FeasibilityCertificate:
    """
    Decide whether a multiset of squares fits one unit bin.

    Args:
        sizes: Square sides in (0, 1]
        limits: Search limits; max_items caps the multisets handed to the exhaustive search
        use_cache: Reuse verdicts of earlier calls on the same multiset
        budget: Shared budget of an enclosing search

    Returns:
        Certificate with (size, x, y) per input size, in input order, when feasible

    Raises:
        BudgetExceededError: If the cheap tests cannot decide a multiset larger than max_items,
            or the search runs out of budget
        PreconditionError: If a size lies outside (0, 1]
    """
    values = [to_fraction(s) for s in sizes]
    limits = limits or SearchLimits()
    bad = [s for s in values if not 0 < s <= 1]
    if bad:
        raise PreconditionError(f"sizes {bad[:5]} outside (0, 1]")

    key = tuple(sorted(values, reverse=True))
    if use_cache and key in _FIT_CACHE:
        found = _FIT_CACHE[key]
        _FIT_CACHE.move_to_end(key)
    else:
        found = _decide(key, limits, budget)
        if use_cache:
            _FIT_CACHE[key] = found
            if len(_FIT_CACHE) > FIT_CACHE_SIZE:
                _FIT_CACHE.popitem(last=False)

    if found is None:
        return FeasibilityCertificate(feasible=False)
    pending: dict[Fraction, list[tuple[Fraction, Fraction]]] = {}
    for s, x, y in found:
        pending.setdefault(s, []).append((x, y))
    ordered = []
    for s in values:
        x, y = pending[s].pop(0)
        ordered.append((s, x, y))
    return FeasibilityCertificate(feasible=True, placements=tuple(ordered))


def _decide(
    key: tuple[Fraction, ...],
    limits: SearchLimits,
    budget: SearchBudget | None,
) -> tuple[tuple[Fraction, Fraction, Fraction], ...] | None:
    if not key:
        return ()
    reason = _quick_infeasible(key)
    if reason is not None:
        logger.debug(f"Fit rejected ({reason}) for {len(key)} items")
        return None
    shelf = _shelf_attempt(key)
    if shelf is not None:
        return shelf
    if len(key) > limits.max_items:
        raise BudgetExceededError(f"{len(key)} items in one bin exceed max_items={limits.max_items}")
    return _search(key, budget or SearchBudget(limits))


# --- Configuration search ---

class ConfigurationSearch:
    """
    Min-sum packing of a multiset given by distinct sizes and their counts.

    With prune=False every ordered choice of configurations is considered:
    no bin-count cap, no tie order and no lower-bound cut.
    """

    def __init__(
        self,
        sizes: Sequence[Fraction],
        counts: Sequence[int],
        fits: Callable[[list[Fraction]], bool],
        budget: SearchBudget,
        prune: bool = True,
    ):
        self.sizes = list(sizes)
        self.counts = tuple(counts)
        self.fits = fits
        self.budget = budget
        self.prune = prune
        self._memo: dict[tuple, tuple[float, Config | None]] = {}
        self.configs = self._enumerate()

    def multiset(self, vector: Sequence[int]) -> list[Fraction]:
        return [s for s, c in zip(self.sizes, vector) for _ in range(c)]

    def _enumerate(self) -> list[Config]:
        configs: list[Config] = []
        vector = [0] * len(self.sizes)

        def extend(j: int) -> None:
            if j == len(self.sizes):
                if any(vector):
                    configs.append(tuple(vector))
                return
            for c in range(self.counts[j] + 1):
                vector[j] = c
                # supersets of an infeasible multiset are infeasible
                if c > 0 and not self.fits(self.multiset(vector)):
                    break
                extend(j + 1)
            vector[j] = 0

        extend(0)
        configs.sort(key=lambda c: (-sum(c), tuple(-v for v in c)))
        return configs

    def solve(self) -> list[Config]:
        """Configurations in bin order for an optimal packing."""
        total = sum(self.counts)
        if total == 0:
            return []
        cap = total if self.prune else 0
        value, _ = self._best(self.counts, cap, None)
        if value == math.inf:
            raise BudgetExceededError("configuration search found no packing")
        sequence = []
        remaining, last = self.counts, None
        while sum(remaining):
            _, choice = self._best(remaining, cap, last)
            sequence.append(choice)
            remaining = tuple(r - c for r, c in zip(remaining, choice))
            if self.prune:
                cap, last = sum(choice), choice
        return sequence

    def _best(self, remaining: Config, cap: int, last: Config | None) -> tuple[float, Config | None]:
        key = (remaining, cap, last)
        if key in self._memo:
            return self._memo[key]
        self.budget.tick()

        left = sum(remaining)
        best_value: float = math.inf
        best_choice = None
        for config in self.configs:
            if any(c > r for c, r in zip(config, remaining)):
                continue
            count = sum(config)
            rest = tuple(r - c for r, c in zip(remaining, config))
            if self.prune:
                if count > cap or (count == cap and last is not None and config > last):
                    continue
                if left + lb1_of_sizes(self.multiset(rest)) >= best_value:
                    continue
                sub_value, _ = self._best(rest, count, config) if any(rest) else (0, None)
            else:
                sub_value, _ = self._best(rest, 0, None) if any(rest) else (0, None)
            value = left + sub_value
            if value < best_value:
                best_value, best_choice = value, config

        self._memo[key] = (best_value, best_choice)
        return best_value, best_choice


def distinct_counts(items: Sequence[Item]) -> tuple[list[Fraction], list[int], dict[Fraction, list[int]]]:
    """Distinct sizes (non-increasing), their counts, and ids per size (ascending)."""
    ids_by_size: dict[Fraction, list[int]] = {}
    for item in sorted(items, key=lambda it: it.id):
        ids_by_size.setdefault(item.size, []).append(item.id)
    sizes = sorted(ids_by_size, reverse=True)
    return sizes, [len(ids_by_size[s]) for s in sizes], ids_by_size


def pack_configurations(
    search: ConfigurationSearch,
    sequence: Sequence[Config],
    ids_by_size: dict[Fraction, list[int]],
    limits: SearchLimits,
    use_cache: bool = True,
) -> Packing:
    """Turn a configuration sequence into placements, lowest ids first per size."""
    pool = {s: list(ids) for s, ids in ids_by_size.items()}
    placements = []
    for bin_index, config in enumerate(sequence, start=1):
        certificate = fits_in_unit_bin(search.multiset(config), limits, use_cache, search.budget)
        for s, x, y in certificate.placements:
            placements.append(Placement(item_id=pool[s].pop(0), bin=bin_index, x=x, y=y, size=s))
    return Packing(placements=tuple(placements))


def exact_min_sum(
    inst: Instance,
    limits: SearchLimits | None = None,
    prune: bool = True,
    use_cache: bool = True,
) -> tuple[Packing, int]:
    """
    Provably optimal min-sum packing of a tiny instance.

    Args:
        inst: Instance with at most limits.max_items items
        limits: Item, node and time budgets
        prune: Apply the lower-bound cut and the dominance orderings
        use_cache: Reuse one-bin verdicts across calls

    Returns:
        (optimal packing, its cost)

    Raises:
        BudgetExceededError: If the instance is too large or a budget runs out
    """
    limits = limits or SearchLimits()
    if inst.n > limits.max_items:
        raise BudgetExceededError(f"exact oracle limited to {limits.max_items} items, instance has {inst.n}")
    if inst.n == 0:
        return Packing(), 0

    budget = SearchBudget(limits)
    sizes, counts, ids_by_size = distinct_counts(inst.items)
    search = ConfigurationSearch(
        sizes,
        counts,
        lambda multiset: fits_in_unit_bin(multiset, limits, use_cache, budget).feasible,
        budget,
        prune=prune,
    )
    sequence = search.solve()
    packing = pack_configurations(search, sequence, ids_by_size, limits, use_cache)
    logger.debug(f"Exact oracle: n={inst.n} bins={len(sequence)} cost={cost(packing)} nodes={budget.nodes}")
    return packing, cost(packing)
