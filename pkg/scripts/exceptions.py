"""
exceptions.py

Error hierarchy shared by every TactileSensePro module. All errors are also
``ValueError`` subclasses so callers can keep catching bad input the usual way.
The ``exit_code`` attribute is what ``tactile_cli.py`` returns to the shell.

Author: Satvik Praveen
Project: TactileSensePro
"""

from typing import Optional


class TactileError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


# ✅ Usage & configuration (exit 1)
class UsageError(TactileError, ValueError):
    """A function or command was called with arguments it cannot accept."""

    exit_code = 1


class ConfigurationError(TactileError, ValueError):
    """A configuration value or combination of values is invalid."""

    exit_code = 1


# ✅ Data problems (exit 2)
class DataError(TactileError, ValueError):
    """Input data is outside what the models accept."""

    exit_code = 2


class DomainError(DataError):
    """A physical quantity is outside the domain of the model."""


class ParseError(DataError):
    """A text record could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ArityError(ParseError):
    """A sample line carries the wrong number of channels."""


class StreamError(ParseError):
    """A sample stream violates ordering rules (e.g. time goes backwards)."""


# ✅ Numerical failures (exit 3)
class FitError(TactileError, ValueError):
    """A polynomial fit could not be computed."""

    exit_code = 3


class UnderdeterminedFitError(FitError):
    """Fewer samples than coefficients."""


class SingularFitError(FitError):
    """The design matrix is rank deficient for the requested order."""

    def __init__(self, message: str, order: Optional[int] = None):
        self.order = order
        super().__init__(message)
