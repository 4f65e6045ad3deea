"""Exception hierarchy shared by all kolam modules."""

from __future__ import annotations


class KolamError(Exception):
    """Base class for every error raised by this package."""


class InvalidGridError(KolamError, ValueError):
    pass


class InvalidSymmetryError(KolamError, ValueError):
    pass


class KolamParseError(KolamError, ValueError):
    """Malformed text input. Carries a 1-based line (and optional column)."""

    def __init__(self, message: str, line: int, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


class TooLargeError(KolamError):
    pass


class SearchExhaustedError(KolamError):
    pass


class NoPatternError(KolamError):
    pass


class OffsetTooLargeError(KolamError, ValueError):
    pass


class InvalidScaleError(KolamError, ValueError):
    pass


class MappingError(KolamError):
    """A record cannot be resolved against a mapping spec."""


class RadiusBoundError(KolamError, ValueError):
    """Dot radius would let the line touch a dot."""


class AssignmentError(KolamError, ValueError):
    """A 'key=value' token is malformed."""

    def __init__(self, message: str, token: str):
        self.token = token
        super().__init__(message)
