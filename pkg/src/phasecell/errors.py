"""Exception types raised by phasecell."""


class PhasecellError(Exception):
    """Base class for all library errors."""


class BasisError(PhasecellError, ValueError):
    """A truncated basis violates its invariants."""


class DimensionMismatchError(PhasecellError, ValueError):
    """Operators or wave functions live on incompatible lattices."""


class DomainError(PhasecellError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class StabilityError(PhasecellError):
    """Time step violates the leapfrog stability bound.

    ``suggested_dt`` carries a step that satisfies the bound.
    """

    def __init__(self, message, suggested_dt=None):
        super().__init__(message)
        self.suggested_dt = suggested_dt


class MemoryBudgetError(PhasecellError):
    """A dense operation would exceed the configured memory budget."""

    def __init__(self, message, required_bytes=None, budget_bytes=None):
        super().__init__(message)
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes


class ConvergenceError(PhasecellError):
    """A numerical procedure failed to converge."""
