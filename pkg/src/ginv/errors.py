"""Exception types raised by the table builders and identity evaluators."""


class GinvError(Exception):
    """Base class for all package errors."""


class CapacityError(GinvError, ValueError):
    """Requested limit exceeds the configured memory budget or table size."""


class RangeError(GinvError, IndexError):
    """Argument outside the range covered by a table."""


class DomainError(GinvError, ValueError):
    """Argument outside the mathematical domain of a function."""


class LimitMismatchError(GinvError, ValueError):
    """Two tables with different limits were combined."""


class ZeroLeadingValueError(GinvError, ZeroDivisionError):
    """Dirichlet inversion attempted on a function with f(1) = 0."""
