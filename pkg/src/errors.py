"""
Exception hierarchy for the integro-differential calculator.

Every error raised on purpose by the library derives from IntDiffError, so
callers (and the CLI) can tell a rejected input from a programming bug.
"""


class IntDiffError(Exception):
    """Base class for all deliberate errors."""


class DomainError(IntDiffError, ValueError):
    """The requested operation is not defined for the given input."""


class ExpressionSyntaxError(IntDiffError, ValueError):
    """An expression string does not conform to the grammar."""

    def __init__(self, message: str, text: str = "", line: int = 1, column: int = 1):
        self.message = message
        self.text = text
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class CertificationError(IntDiffError, RuntimeError):
    """A computed result failed its exact self-check."""


class ConfigurationError(IntDiffError, ValueError):
    """An environment setting could not be interpreted."""
