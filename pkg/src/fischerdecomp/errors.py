"""Exception types shared across the package."""


class FischerError(Exception):
    """Base class for errors raised by fischerdecomp."""


class ParseError(FischerError, ValueError):
    """Raised on malformed polynomial or operator text.

    ``position`` is the 0-based character offset where parsing failed.
    """

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} (at position {position})")


class AmbientMismatch(FischerError, ValueError):
    """Operands live in different ambient spaces (k, m)."""


class ResourceCapExceeded(FischerError):
    """A monomial space is larger than the configured cap."""

    def __init__(self, dimension, cap, what="monomial space"):
        self.dimension = dimension
        self.cap = cap
        super().__init__(f"{what} has dimension {dimension}, exceeding cap {cap}")
