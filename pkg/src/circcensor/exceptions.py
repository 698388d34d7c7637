"""Exception hierarchy shared by every module of the package."""


class CircCensorError(Exception):
    """Base class for all errors raised by circcensor."""


class InvalidAngleError(CircCensorError, ValueError):
    """An angle was NaN or infinite."""


class InvalidArcError(CircCensorError, ValueError):
    """An arc was built with coincident endpoints."""


class DomainError(CircCensorError, ValueError):
    """A special function was called outside its supported domain."""


class UnsupportedDensityError(CircCensorError, TypeError):
    """The distribution has no Lebesgue density (e.g. a point mass)."""


class DegenerateModelError(CircCensorError, RuntimeError):
    """A censoring model keeps producing zero-length windows."""


class InvalidInputError(CircCensorError, ValueError):
    """Generic invalid argument to an estimator."""


class SampleTooSmallError(InvalidInputError):
    """The model collection {1, ..., n//2 - 1} is empty."""


class CalibrationFailed(CircCensorError, RuntimeError):
    """The dimension-jump calibration found no jump in the selection path."""


class EmptyDensityError(CircCensorError, ValueError):
    """A density estimate integrates to zero."""


class ConfigError(CircCensorError, ValueError):
    """Invalid run configuration. ``key`` names the offending setting."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class DataError(CircCensorError, ValueError):
    """Malformed sample file. ``line`` is the 1-based line number, if known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
