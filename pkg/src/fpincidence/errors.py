"""Exception types shared across the package."""


class FpIncidenceError(Exception):
    """Base class for errors raised by fpincidence."""


class DomainError(FpIncidenceError, ArithmeticError):
    """An operation was applied outside its mathematical domain (e.g. inverting zero)."""


class UsageError(FpIncidenceError, ValueError):
    """Arguments are malformed: dimension mismatch, unknown name, missing magnitude."""


class DegenerateInputError(UsageError):
    """Input is well-formed but degenerate for the construction (e.g. two equal points)."""
