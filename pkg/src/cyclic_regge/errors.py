"""Exception types shared across the package."""


class ReggeError(Exception):
    """Base class for all package errors."""


class ArgumentError(ReggeError, ValueError):
    """An argument violates an operation's precondition."""


class DomainError(ReggeError, ValueError):
    """A length configuration is not a metric (non-realizable or degenerate)."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class NumericalError(ReggeError, ArithmeticError):
    """Round-off exceeded what the computation can absorb."""
