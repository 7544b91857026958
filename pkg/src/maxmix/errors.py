"""Shared exception types for the maxmix package."""


class PreconditionError(ValueError):
    """A documented precondition of an operation was violated by the caller."""


class InvariantViolation(RuntimeError):
    """An internal mathematical certificate failed.

    These are raised when an exact computation contradicts a mathematical
    fact the code relies on; they indicate a bug in this package, never
    bad input.
    """


class ResourceCapExceeded(RuntimeError):
    """A computation would exceed a configured size cap and was refused."""


class AssemblyParseError(ValueError):
    """An assembly file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
