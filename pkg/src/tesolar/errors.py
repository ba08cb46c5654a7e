"""Exception hierarchy.

``ConfigError`` covers bad parameters (the CLI exits with 1), ``DataError``
covers problems found in the data itself (the CLI exits with 2).
"""


class TesolarError(Exception):
    """Base class for all package errors."""


class ConfigError(TesolarError, ValueError):
    """Invalid parameters or configuration."""


class RangeError(ConfigError):
    """A timestamp or coordinate outside the supported range."""


class DataError(TesolarError):
    """The data cannot support the requested operation."""


class ParseError(DataError):
    """Malformed or invalid CSV content. ``line`` is 1-based."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OrderingError(DataError):
    pass


class InsufficientDataError(DataError):
    pass


class AlignmentError(DataError):
    pass


class NumericDomainError(DataError):
    pass


class SunBelowHorizon(TesolarError):
    """Raised where a daytime-only quantity is asked for at night."""


class DegenerateCycleError(DataError):
    """A seasonal cycle averages to zero, so ratio-form indices are undefined."""
