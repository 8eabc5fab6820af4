"""Exception types shared across the package."""


class GibbsLabError(Exception):
    """Base class for package errors."""


class InvalidArgument(GibbsLabError, ValueError):
    """A precondition on an argument was violated."""


class InvalidState(GibbsLabError, RuntimeError):
    """An operation was invoked in a state that does not support it."""


class BudgetExceeded(GibbsLabError, RuntimeError):
    """An exact-enumeration budget would be exceeded.

    Carries the requested and allowed sizes so callers can report what budget
    a run would need.
    """

    def __init__(self, message: str, required: int | None = None, allowed: int | None = None):
        super().__init__(message)
        self.required = required
        self.allowed = allowed


class MissingKey(GibbsLabError, KeyError):
    """A canonical key required by an operation is not covered by its input."""


class NonConvergence(GibbsLabError, RuntimeError):
    """An iterative solver failed to reach its tolerance within its cap."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class Infeasible(GibbsLabError, RuntimeError):
    """A combinatorial feasibility requirement cannot be met."""
