"""Shared exception types."""


class GraphFormatError(ValueError):
    """Malformed graph or kernel document.

    Carries the 1-based line number of the offending input line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormulaSyntaxError(ValueError):
    """Malformed formula text; ``pos`` is the character offset."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"at offset {pos}: {message}"
        super().__init__(message)


class CapExceededError(RuntimeError):
    """An input is larger than the configured budget for an operation.

    Raised instead of silently truncating or guessing.  The message names
    the offending object and the flag/argument that raises the budget.
    """
