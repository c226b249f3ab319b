"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: usage problems are 1, data/validation
problems (everything deriving from :class:`PopnetError`) are 2, anything
else is an internal error (3).
"""


class PopnetError(Exception):
    """Base class for all data and validation errors raised by popnet."""


class ParseError(PopnetError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(PopnetError):
    """Input parsed but violates a documented constraint."""


class ArgumentError(PopnetError):
    """Caller passed arguments outside an operation's contract."""


class UndefinedStatisticError(PopnetError):
    """The requested statistic is undefined on this input (e.g. zero variance)."""


class SizeLimitError(PopnetError):
    """Operation refused because the graph exceeds its configured size limit."""


class ConvergenceError(PopnetError):
    """An iterative method failed in a way that cannot be returned as a flag."""


class SchemaError(PopnetError):
    """Serialized artifact carries an unsupported schema version."""
