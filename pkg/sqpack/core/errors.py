"""
Exception hierarchy for sqpack.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from sqpack.models.packing import Violation


class SqpackError(Exception):
    """Base class for every domain error raised by sqpack."""


class InstanceFormatError(SqpackError, ValueError):
    """Malformed instance or packing text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(SqpackError, ValueError):
    """An operation was called outside its documented domain."""


class InfeasiblePackingError(SqpackError):
    """A packing failed validation."""

    def __init__(self, violations: Sequence[Violation], context: str = "packing"):
        self.violations = list(violations)
        shown = "; ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            shown += f"; ... {more} more"
        super().__init__(f"infeasible {context}: {shown}")


class BudgetExceededError(SqpackError):
    """The exact search ran out of its node, time or size budget."""


class StrictModeInfeasibleError(BudgetExceededError):
    """Strict PTAS constants make the configuration search explode."""

    def __init__(self, detail: str):
        super().__init__(
            f"strict mode infeasible at this scale ({detail}); "
            "rerun with --mode relaxed and explicit thresholds"
        )


class InvariantError(SqpackError):
    """An internal invariant that the algorithms guarantee did not hold."""
