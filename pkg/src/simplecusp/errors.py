"""Exception types shared across the package."""

from __future__ import annotations


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class NotInvertibleError(ZeroDivisionError):
    def __init__(self, what: str = "value") -> None:
        super().__init__(f"{what} is not invertible")


class PrecisionError(ArithmeticError):
    """A truncated series was asked for a coefficient it does not determine."""


class ScopeError(PreconditionError):
    """The requested quantity is outside the supported formula's range."""


class BudgetExceededError(PreconditionError):
    def __init__(self, size: int, budget: int) -> None:
        super().__init__(f"enumeration size {size} exceeds budget {budget}")
        self.size = size
        self.budget = budget
