"""Exception types raised by the library."""


class LowRankError(Exception):
    """Base class for every error raised by :mod:`lowrank`."""


class ParameterError(LowRankError, ValueError):
    """An argument is out of its admissible range (rank, sample count, ...)."""


class InputError(LowRankError, ValueError):
    """A matrix argument is malformed: wrong shape, empty, or non-finite."""


class SingularityError(LowRankError, ArithmeticError):
    """A triangular solve hit a zero pivot with an inconsistent right-hand side."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"zero pivot at index {index} with nonzero right-hand side")


class ConvergenceError(LowRankError, ArithmeticError):
    """An iterative kernel exhausted its iteration budget."""


class ParseError(LowRankError, ValueError):
    """A file could not be parsed. ``lineno`` is 1-based, or None."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(LowRankError, ValueError):
    """Factors supplied together are mutually inconsistent."""
