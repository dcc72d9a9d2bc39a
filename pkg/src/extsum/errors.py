"""Exception hierarchy shared by every module of the package."""

__all__ = [
    "ExtsumError",
    "InvalidParameterError",
    "DimensionMismatchError",
    "DomainError",
    "EmptySubdifferentialError",
    "UnsupportedOracleError",
    "UnsupportedResolventError",
    "ScheduleRangeError",
    "InvalidScheduleError",
    "SpecializationMismatchError",
    "InsufficientResolutionError",
    "BaselineInapplicableError",
]


class ExtsumError(Exception):
    """Base class for all errors raised by extsum."""


class InvalidParameterError(ExtsumError, ValueError):
    pass


class DimensionMismatchError(ExtsumError, ValueError):
    pass


class DomainError(ExtsumError, ValueError):
    """A point lies outside the effective domain of a function."""


class EmptySubdifferentialError(ExtsumError, ValueError):
    """The exact subdifferential is empty at the requested point."""


class UnsupportedOracleError(ExtsumError, NotImplementedError):
    """The requested closed form is not available for this oracle kind."""


class UnsupportedResolventError(UnsupportedOracleError):
    pass


class ScheduleRangeError(ExtsumError, IndexError):
    pass


class InvalidScheduleError(ExtsumError, ValueError):
    """A step schedule failed validation and the run was not marked unsafe."""


class SpecializationMismatchError(ExtsumError, TypeError):
    pass


class InsufficientResolutionError(ExtsumError, ValueError):
    """A check needs every iterate but the trace was thinned."""


class BaselineInapplicableError(EmptySubdifferentialError):
    """The exact-subgradient baseline met a point with empty subdifferential.

    Attributes
    ----------
    n : int
        Iteration index at which the selection failed.
    x : ndarray
        The iterate at that index.
    trace : ConvergenceTrace or None
        Rows recorded before the failure.
    """

    def __init__(self, message, n=None, x=None, trace=None):
        super().__init__(message)
        self.n = n
        self.x = x
        self.trace = trace
