"""
PTAS service - medium-window selection, linear grouping, optimal packing of
rounded large items, the small/large merge, L1 reinstatement and medium
insertion, with the cost change of every stage measured.

Strict mode derives the thresholds from eps as the analysis does; at desk
scale that leaves S and M empty, so relaxed mode takes explicit thresholds and
runs every transformation on real items.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from sqpack.core.errors import (
    BudgetExceededError,
    InvariantError,
    PreconditionError,
    StrictModeInfeasibleError,
)
from sqpack.core.logger import logger
from sqpack.models.packing import Instance, Item, Packing, Placement
from sqpack.models.schemas import (
    LinearGrouping,
    MediumSelection,
    PtasParams,
    SearchLimits,
    StageReport,
    StageRow,
)
from sqpack.services.bounds_service import build_groups, lb1
from sqpack.services.exact_service import (
    ConfigurationSearch,
    SearchBudget,
    distinct_counts,
    fits_in_unit_bin,
    pack_configurations,
)
from sqpack.services.packing_service import (
    concat,
    cost,
    ensure_feasible,
    geometry_violations,
    substitute_sizes,
)
from sqpack.services.shelf_service import feasibilize, nfdh, nfih

# rounded large items may share a bin sixteen at a time (sizes >= 1/4)
PTAS_LIMITS = SearchLimits(max_items=16)


# --- Medium Selection ---

def _ids_in(inst: Instance, lo: Fraction, hi: Fraction) -> list[int]:
    return [item.id for item in inst.items if lo <= item.size < hi]


def select_medium(inst: Instance, eps: Fraction) -> MediumSelection:
    """
    Choose the medium window: the smallest i with |M_i| <= eps^3 n, then the
    smallest ell with area(M_i,ell) <= eps * area(I). Both exist by pigeonhole.
    """
    inverse = eps.denominator
    step = 3 * inverse
    count_cap = eps ** 3 * inst.n
    area_cap = eps * inst.area()

    chosen_i = inverse ** 3
    for i in range(1, inverse ** 3 + 1):
        if len(_ids_in(inst, eps ** (step * (i + 1)), eps ** (step * i))) <= count_cap:
            chosen_i = i
            break

    chosen_ell = inverse - 1
    for ell in range(inverse):
        window = _ids_in(inst, eps ** (step * chosen_i + 3 * (ell + 1)), eps ** (step * chosen_i + 3 * ell))
        if sum((inst.size_of(j) ** 2 for j in window), Fraction(0)) <= area_cap:
            chosen_ell = ell
            break

    p = step * chosen_i + 3 * chosen_ell
    large, small = eps ** p, eps ** (p + 3)
    medium = tuple(_ids_in(inst, small, large))
    selection = MediumSelection(
        i=chosen_i,
        ell=chosen_ell,
        p=p,
        small_threshold=small,
        large_threshold=large,
        M=medium,
        S=tuple(item.id for item in inst.items if item.size < small),
        L=tuple(item.id for item in inst.items if item.size >= large),
        caps_hold=_caps_hold(inst, medium, eps),
    )
    logger.info(f"Medium window: i={chosen_i} ell={chosen_ell} p={p} |S|={len(selection.S)} |M|={len(medium)} |L|={len(selection.L)}")
    return selection


def _caps_hold(inst: Instance, medium: Sequence[int], eps: Fraction) -> bool:
    area = sum((inst.size_of(j) ** 2 for j in medium), Fraction(0))
    return len(medium) <= eps ** 3 * inst.n and area <= eps * inst.area()


def select_relaxed(inst: Instance, params: PtasParams) -> MediumSelection:
    """S: sizes <= small_threshold; L: sizes >= large_threshold above it; M: the rest."""
    small, large = params.small_threshold, params.large_threshold
    S, M, L = [], [], []
    for item in inst.items:
        if item.size <= small:
            S.append(item.id)
        elif item.size >= large:
            L.append(item.id)
        else:
            M.append(item.id)
    selection = MediumSelection(
        small_threshold=small,
        large_threshold=large,
        S=tuple(S),
        M=tuple(M),
        L=tuple(L),
        caps_hold=_caps_hold(inst, M, params.eps),
    )
    logger.info(f"Relaxed windows: |S|={len(S)} |M|={len(M)} |L|={len(L)} caps_hold={selection.caps_hold}")
    return selection


# --- Large Items ---

def linear_group_large(large: Sequence[Item], gamma: Fraction) -> LinearGrouping:
    """
    Split the large items, largest first, into 1/gamma groups whose sizes
    differ by at most one (larger groups first). Group 1 is discarded, every
    other item is rounded up to the largest size of its group.
    """
    if not large:
        return LinearGrouping()
    group_count = gamma.denominator
    ordered = sorted(large, key=lambda it: (-it.size, it.id))
    width = math.ceil(len(ordered) / group_count)
    wide_groups = len(ordered) - group_count * (width - 1)

    groups: list[list[Item]] = []
    start = 0
    for g in range(group_count):
        size = width if g < wide_groups else width - 1
        if size == 0:
            break
        groups.append(ordered[start:start + size])
        start += size

    rounded = tuple(
        Item(id=item.id, size=group[0].size) for group in groups[1:] for item in group
    )
    return LinearGrouping(
        discarded=tuple(item.id for item in groups[0]),
        rounded=rounded,
        groups=tuple(tuple(item.id for item in group) for group in groups),
    )


def optimal_pack_rounded(
    rounded: Sequence[Item],
    eps: Fraction | None = None,
    limits: SearchLimits | None = None,
) -> Packing:
    """
    Min-sum optimal packing of the rounded large items by configuration search.

    Raises:
        BudgetExceededError: If a bin could hold more items than limits.max_items or the search runs out
    """
    if not rounded:
        return Packing()
    limits = limits or PTAS_LIMITS
    per_bin = min(len(rounded), math.floor(1 / min(item.size for item in rounded)) ** 2)
    if per_bin > limits.max_items:
        raise BudgetExceededError(
            f"rounded large items allow {per_bin} items per bin, above max_items={limits.max_items}"
        )
    budget = SearchBudget(limits)
    sizes, counts, ids_by_size = distinct_counts(rounded)
    search = ConfigurationSearch(
        sizes,
        counts,
        lambda multiset: fits_in_unit_bin(multiset, limits, budget=budget).feasible,
        budget,
    )
    packing = pack_configurations(search, search.solve(), ids_by_size, limits)
    logger.debug(f"Rounded large items: {len(sizes)} sizes, {len(search.configs)} configurations, cost {cost(packing)}")
    return packing


# --- Small Items ---

@dataclass
class MergeOutcome:
    """Merged packing, the case taken and the large items moved by the grid merge."""
    packing: Packing
    case: Literal["none", "A", "B"]
    relocated: tuple[int, ...] = ()


def _grid_cells(size: Fraction, cell: Fraction) -> int:
    return math.floor(size / cell) ** 2


def merge_small_large(
    pL: Packing,
    small: Sequence[Item],
    eps: Fraction,
    small_threshold: Fraction,
) -> MergeOutcome:
    """
    Combine the optimal large-item packing with the small items.

    Case A (few small items): the small items fill cell grids laid inside the
    largest ceil(eps^3 |B_1|) large items of bin 1; each large item whose grid
    is used moves, keeping its coordinates, to one new bin opened at position
    min(1/eps, m+1). Case B: NFIH then feasibilize the small items, and place
    pL after them.

    Raises:
        InvariantError: If the grid runs out of cells in case A
    """
    if not small:
        return MergeOutcome(packing=pL, case="none")

    first_bin = pL.bins_list()[0] if pL.num_bins else []
    hosts_allowed = math.ceil(eps ** 3 * len(first_bin))
    hosts = sorted(first_bin, key=lambda pl: (-pl.size, pl.item_id))[:hosts_allowed]
    capacity = sum(_grid_cells(pl.size, small_threshold) for pl in hosts)

    if len(small) * eps ** 3 < len(first_bin) and capacity >= len(small):
        packing, relocated = _grid_merge(pL, small, hosts, eps, small_threshold)
        logger.info(f"Merge case A: {len(small)} small items in the grids of {len(relocated)} relocated large items")
        return MergeOutcome(packing=packing, case="A", relocated=relocated)

    q = nfih(small, small_threshold)
    packed_small = feasibilize(q, eps, threshold=small_threshold)
    logger.info(f"Merge case B: {len(small)} small items in {packed_small.num_bins} bins ahead of {pL.num_bins} large bins")
    return MergeOutcome(packing=concat(packed_small, pL), case="B")


def _grid_merge(
    pL: Packing,
    small: Sequence[Item],
    hosts: Sequence[Placement],
    eps: Fraction,
    cell: Fraction,
) -> tuple[Packing, tuple[int, ...]]:
    queue = sorted(small, key=lambda it: (-it.size, it.id))
    filled: list[Placement] = []
    used: list[Placement] = []
    for host in hosts:
        if not queue:
            break
        per_row = math.floor(host.size / cell)
        take, queue = queue[:per_row * per_row], queue[per_row * per_row:]
        used.append(host)
        for index, item in enumerate(take):
            row, col = divmod(index, per_row)
            filled.append(Placement(
                item_id=item.id, bin=1, x=host.x + col * cell, y=host.y + row * cell, size=item.size
            ))
    if queue:
        raise InvariantError(f"grid merge left {len(queue)} small items without a cell")

    moved = {pl.item_id for pl in used}
    bins = pL.bins_list()
    bins[0] = [pl for pl in bins[0] if pl.item_id not in moved] + filled
    position = min(eps.denominator, len(bins) + 1)
    bins.insert(position - 1, list(used))
    return Packing.from_bins(bins), tuple(sorted(moved))


# --- Discarded and Medium Items ---

def reinstate_L1(p: Packing, discarded: Sequence[Item], eps: Fraction) -> Packing:
    """
    One new bin per discarded large item, the j-th right after original bin
    min(max(j * (1/eps), ceil(j * m / |L1|)), m).

    Raises:
        PreconditionError: If a discarded item is already packed
    """
    if not discarded:
        return p
    shared = p.item_ids() & {item.id for item in discarded}
    if shared:
        raise PreconditionError(f"discarded items {sorted(shared)[:10]} already in the packing")

    bins = p.bins_list()
    m = len(bins)
    inserted: dict[int, list[list[Placement]]] = {}
    for j, item in enumerate(sorted(discarded, key=lambda it: (-it.size, it.id)), start=1):
        after = min(max(j * eps.denominator, math.ceil(Fraction(j * m, len(discarded)))), m)
        inserted.setdefault(after, []).append(
            [Placement(item_id=item.id, bin=1, x=0, y=0, size=item.size)]
        )

    ordered = list(inserted.get(0, []))
    for index, content in enumerate(bins, start=1):
        ordered.append(content)
        ordered.extend(inserted.get(index, []))
    return Packing.from_bins(ordered)


def insert_medium(p: Packing, medium: Sequence[Item], eps: Fraction) -> Packing:
    """
    NFDH-pack the medium items; for k = 1..1/eps the k-th run of four medium
    bins goes in front of original bin k/eps (at the end when p is shorter).
    Medium bins beyond 4/eps are appended.
    """
    if not medium:
        return p
    medium_bins = nfdh(medium).bins_list()
    inverse = eps.denominator
    chunks = {k * inverse: medium_bins[4 * (k - 1):4 * k] for k in range(1, inverse + 1)}
    extra = medium_bins[4 * inverse:]
    if extra:
        logger.warning(f"{len(extra)} medium bins beyond 4/eps appended at the end")

    bins = p.bins_list()
    ordered: list[list[Placement]] = []
    for index, content in enumerate(bins, start=1):
        ordered.extend(chunks.pop(index, []))
        ordered.append(content)
    for position in sorted(chunks):
        ordered.extend(chunks[position])
    ordered.extend(extra)
    return Packing.from_bins(ordered)


# --- Pipeline ---

def _row(
    name: str,
    before: int,
    after: int,
    bound: Fraction,
    premises_hold: bool = True,
) -> StageRow:
    return StageRow(
        name=name,
        cost_before=before,
        cost_after=after,
        inflation_factor=Fraction(after, before) if before > 0 else None,
        bound_claimed=bound,
        premises_hold=premises_hold,
        within_bound=after <= bound * before if before > 0 else after == 0,
    )


def ptas_solve(
    inst: Instance,
    params: PtasParams,
    reference_cost: int | None = None,
    limits: SearchLimits | None = None,
) -> tuple[Packing, StageReport]:
    """
    Run the five-step pipeline: classify, pack rounded large items optimally,
    merge the small items, reinstate the discarded large items, insert the
    medium items.

    Args:
        inst: Instance to pack
        params: eps, mode and relaxed-mode thresholds
        reference_cost: Cost the cumulative rows compare against; lb1 when omitted
        limits: Configuration search limits

    Returns:
        (feasible packing, per-stage report)

    Raises:
        PreconditionError: If strict mode gets fewer than 1/eps^3 items
        StrictModeInfeasibleError: If strict thresholds make the configuration search explode
        InvariantError: If unrounding breaks the packing geometry
    """
    eps = params.eps
    if params.mode == "strict":
        if inst.n < params.inverse_eps ** 3:
            raise PreconditionError(f"strict mode needs n >= 1/eps^3 = {params.inverse_eps ** 3}, got {inst.n}")
        selection = select_medium(inst, eps)
    else:
        selection = select_relaxed(inst, params)

    tau = selection.small_threshold
    small = inst.subset(selection.S)
    medium = inst.subset(selection.M)
    grouping = linear_group_large(inst.subset(selection.L), params.grouping_fraction)

    try:
        pL = optimal_pack_rounded(grouping.rounded, eps, limits)
    except BudgetExceededError as e:
        if params.mode == "strict":
            raise StrictModeInfeasibleError(str(e)) from e
        raise

    rows = []
    if small:
        q = nfih(small, tau)
        rows.append(_row("small_feasibilize", cost(q), cost(feasibilize(q, eps, threshold=tau)), 1 + eps))

    merge = merge_small_large(pL, small, eps, tau)
    rows.append(_row("merge", cost(pL), cost(merge.packing), 1 + 4 * eps, premises_hold=params.mode == "strict"))

    unrounded = substitute_sizes(merge.packing, {item.id: inst.size_of(item.id) for item in grouping.rounded})
    broken = geometry_violations(unrounded.placements)
    if broken:
        raise InvariantError(f"unrounding broke {len(broken)} placements: {broken[0]}")

    reinstated = reinstate_L1(unrounded, inst.subset(grouping.discarded), eps)
    rows.append(_row("reinstate_L1", cost(unrounded), cost(reinstated), 1 + 13 * eps))

    final = ensure_feasible(insert_medium(reinstated, medium, eps), inst, "ptas")
    rows.append(_row("insert_medium", cost(reinstated), cost(final), 1 + 7 * eps, premises_hold=selection.caps_hold))

    reference = reference_cost if reference_cost is not None else lb1(build_groups(inst))
    rows.append(_row("after_merge", reference, cost(merge.packing), 1 + 4 * eps))
    rows.append(_row("after_reinstate", reference, cost(reinstated), 1 + 30 * eps))
    rows.append(_row("final", reference, cost(final), 1 + 90 * eps))

    report = StageReport(rows=tuple(rows), merge_case=merge.case, reference_cost=reference)
    logger.info(
        f"ptas ({params.mode}, eps={eps}): n={inst.n} bins={final.num_bins} cost={cost(final)} "
        f"merge={merge.case} reference={reference}"
    )
    return final, report
