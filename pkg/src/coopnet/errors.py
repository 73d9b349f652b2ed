"""Exception hierarchy shared by all coopnet modules."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import TYPE_CHECKING, Any


if TYPE_CHECKING:
    from pydantic import ValidationError


class CoopnetError(Exception):
    """Base class for every error raised by coopnet."""


class DimensionMismatchError(CoopnetError, ValueError):
    """Two states (or a state and a network) disagree on their dimension."""


class DimensionCapError(CoopnetError, ValueError):
    """An exhaustive operation was refused because the dimension exceeds its cap."""


class DomainError(CoopnetError, ValueError):
    """A numeric argument lies outside the domain of an operation."""


class BudgetExceededError(CoopnetError, RuntimeError):
    """Cycle detection ran out of its step budget."""

    def __init__(self, steps: int, budget: int) -> None:
        self.steps = steps
        self.budget = budget
        super().__init__(f"Step budget exhausted after {steps} steps (budget {budget})")


class ConstructionError(CoopnetError, ValueError):
    """A construction is infeasible or its built instance violates a condition."""

    def __init__(
        self,
        message: str,
        *,
        condition: str | None = None,
        witness: tuple[Any, ...] | None = None,
    ) -> None:
        self.condition = condition
        self.witness = witness
        super().__init__(message)


class OrderViolationError(CoopnetError, RuntimeError):
    """An ordered pair of trajectories lost its order under a cooperative map."""


class StructuralInconsistencyError(CoopnetError, RuntimeError):
    """Degree bookkeeping of a network contradicts itself."""


@dataclass
class FormatErrorDetail:
    """Structured information about one problem in a network document."""

    type: str = "value_error"
    msg: str = "Validation error"
    loc: tuple[str | int, ...] = dc_field(default_factory=tuple)

    def __str__(self) -> str:
        location = ".".join(str(part) for part in self.loc) or "<document>"
        return f"{location}: {self.msg} ({self.type})"


class NetworkFormatError(CoopnetError, ValueError):
    """A network document could not be parsed or validated."""

    def __init__(self, details: list[FormatErrorDetail]) -> None:
        self.details = details
        lines = "\n".join(f"  {detail}" for detail in details)
        super().__init__(f"Invalid network document:\n{lines}")

    @classmethod
    def from_validation_error(cls, error: ValidationError) -> NetworkFormatError:
        """Convert a pydantic validation error, keeping locations."""
        details = [
            FormatErrorDetail(type=err["type"], msg=err["msg"], loc=tuple(err["loc"]))
            for err in error.errors()
        ]
        return cls(details)
