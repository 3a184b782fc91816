"""
Pydantic models for solver parameters and reports.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from sqpack.core.config import settings
from sqpack.models.packing import Item, Rational

_FROZEN = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# --- Generator Models ---

class GeneratorSpec(BaseModel):
    """Family and parameters of a generated instance."""
    model_config = _FROZEN

    family: Literal["adversarial", "uniform", "all_large", "corner_mix"]
    t: int | None = Field(None, description="Adversarial family parameter")
    n: int | None = Field(None, ge=0, description="Item count for random families")
    lo: Rational | None = Field(None, description="Exclusive lower size bound")
    hi: Rational | None = Field(None, description="Inclusive upper size bound")
    seed: int = Field(0, ge=0, lt=2**64)
    max_denominator: int = Field(settings.GEN_MAX_DENOMINATOR, ge=1, le=10**6)

    @model_validator(mode="after")
    def _family_parameters(self) -> GeneratorSpec:
        if self.family == "adversarial":
            if self.t is None or self.t < 3:
                raise ValueError("adversarial family requires integer t >= 3")
            return self
        if self.n is None:
            raise ValueError(f"{self.family} family requires n")
        if self.family == "uniform":
            if self.lo is None or self.hi is None or not 0 < self.lo < self.hi <= 1:
                raise ValueError("uniform family requires 0 < lo < hi <= 1")
        if self.family == "all_large" and self.lo is not None and not Fraction(1, 2) <= self.lo < 1:
            raise ValueError("all_large family requires 1/2 <= lo < 1")
        return self


# --- Bound Models ---

class GroupPartition(BaseModel):
    """Greedy area groups over the non-decreasing size order."""
    model_config = _FROZEN

    groups: tuple[tuple[int, ...], ...] = ()
    r: int = Field(0, ge=0, description="Leading closed groups made only of small items")
    small_tail: tuple[int, ...] = Field((), description="Small items of group r+1")
    R: int = Field(0, ge=0, description="Weighted small-item group sum")

    @property
    def q(self) -> int:
        return len(self.groups)


class CaseConstants(BaseModel):
    """Thresholds splitting the worst-case analysis of the 53/22 algorithm."""
    model_config = _FROZEN

    k_limit: int
    b_limit: int
    r_limit: int
    s_limit: int
    n_limit: int
    c_limit: int


class KBStats(BaseModel):
    """Medium-involved and lone-large counts of the FFDS packing."""
    model_config = _FROZEN

    k: int = Field(0, ge=0)
    b: int = Field(0, ge=0)


class ApproxReport(BaseModel):
    """Diagnostics tying a 53/22 run to its lower bounds."""
    model_config = _FROZEN

    cost: int
    lb1: int
    lb2: int
    r: int
    k: int
    b: int
    s: int
    R: int
    small_bins: int
    small_cost: int
    ffds_cost: int = Field(..., description="ffds(0): cost of the reordered FFDS part alone")
    upper_bound_2R_plus_ffds: int = Field(..., description="2R + ffds(2r+2)")
    whole_bound: int = Field(..., description="2R + ffds(0) + (k+b)*small_bins")
    ratio_vs_max_lb: Rational
    refined_lb1_rhs: Rational
    general_bound_lhs: Rational
    general_bound_rhs_22: Rational
    general_bound_rhs_9: Rational
    cost_bound_rhs: Rational
    analysis_case: Literal["large_kb", "large_s", "bounded_n"]


# --- Exact Oracle Models ---

class SearchLimits(BaseModel):
    """Budgets for the exact oracle; exceeding any of them raises."""
    model_config = _FROZEN

    max_items: int = Field(settings.EXACT_MAX_ITEMS, ge=1)
    node_budget: int = Field(settings.EXACT_NODE_BUDGET, ge=1)
    time_budget: float = Field(settings.EXACT_TIME_BUDGET, gt=0, description="Seconds")


class FeasibilityCertificate(BaseModel):
    """Verdict of the one-bin search, with coordinates when feasible."""
    model_config = _FROZEN

    feasible: bool
    placements: tuple[tuple[Rational, Rational, Rational], ...] | None = Field(
        None, description="(size, x, y) triples in input order"
    )


# --- PTAS Models ---

class PtasParams(BaseModel):
    """Accuracy, mode and the relaxed-mode threshold overrides."""
    model_config = _FROZEN

    eps: Rational = Field(settings.DEFAULT_EPS)
    mode: Literal["strict", "relaxed"] = "strict"
    small_threshold: Rational | None = None
    large_threshold: Rational | None = None
    gamma: Rational | None = Field(None, description="Linear grouping fraction; eps^2 when unset")

    @model_validator(mode="after")
    def _check(self) -> PtasParams:
        if self.eps.numerator != 1 or self.eps.denominator < 4:
            raise ValueError("eps must be 1/k for an integer k >= 4")
        if self.gamma is not None and (self.gamma.numerator != 1 or self.gamma > 1):
            raise ValueError("gamma must be 1/k for a positive integer k")
        if self.mode == "relaxed":
            small, large = self.small_threshold, self.large_threshold
            if small is None or large is None:
                raise ValueError("relaxed mode requires small_threshold and large_threshold")
            if not 0 < small <= large <= 1:
                raise ValueError("relaxed mode requires 0 < small_threshold <= large_threshold <= 1")
        return self

    @property
    def inverse_eps(self) -> int:
        return self.eps.denominator

    @property
    def grouping_fraction(self) -> Fraction:
        return self.gamma if self.gamma is not None else self.eps * self.eps


class MediumSelection(BaseModel):
    """The size windows splitting an instance into small, medium and large items."""
    model_config = _FROZEN

    i: int | None = Field(None, description="Outer window index (strict mode)")
    ell: int | None = Field(None, description="Inner window index (strict mode)")
    p: int | None = Field(None, description="Threshold exponent (strict mode)")
    small_threshold: Rational
    large_threshold: Rational
    M: tuple[int, ...] = ()
    S: tuple[int, ...] = ()
    L: tuple[int, ...] = ()
    caps_hold: bool = True


class LinearGrouping(BaseModel):
    """Large items grouped by count, largest group discarded, rest rounded up."""
    model_config = _FROZEN

    discarded: tuple[int, ...] = ()
    rounded: tuple[Item, ...] = ()
    groups: tuple[tuple[int, ...], ...] = ()


class StageRow(BaseModel):
    """Measured cost change of one pipeline stage."""
    model_config = _FROZEN

    name: str
    cost_before: int
    cost_after: int
    inflation_factor: Rational | None = None
    bound_claimed: Rational
    premises_hold: bool = True
    within_bound: bool | None = None


class StageReport(BaseModel):
    """All stage rows of a PTAS run plus the merge case taken."""
    model_config = _FROZEN

    rows: tuple[StageRow, ...] = ()
    merge_case: Literal["none", "A", "B"] = "none"
    reference_cost: int = 0

    def row(self, name: str) -> StageRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)
