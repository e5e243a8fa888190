"""Exception types raised across the package."""


class CliffordError(Exception):
    """Base class for all package errors."""


class DimensionError(CliffordError, ValueError):
    """Operands live in Clifford algebras of different dimension."""


class SingularityError(CliffordError, ZeroDivisionError):
    """An inverse or kernel was requested at a singular point."""


class BudgetError(CliffordError, ValueError):
    """A combinatorial or degree budget was exceeded."""


class DomainError(CliffordError, ValueError):
    """A point lies outside the domain where an operation is defined."""


class TruncationError(CliffordError, ArithmeticError):
    """A certified truncation tail exceeds the requested tolerance."""


class ConsistencyError(CliffordError, ArithmeticError):
    """Two independent evaluation routes of the same quantity disagree."""


class ConfigError(CliffordError, ValueError):
    """Invalid experiment configuration.

    ``field`` names the offending configuration entry.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
