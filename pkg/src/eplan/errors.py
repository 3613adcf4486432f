"""Exception types raised by the planner."""


class EplanError(Exception):
    """Base class for all planner errors."""


class ParseError(EplanError):
    """Malformed input text, with an optional source location."""

    def __init__(self, message, line=None, col=None, source=None):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = ""
        if self.source:
            where += f"{self.source}:"
        if self.line is not None:
            where += f"{self.line}:{self.col}:"
        return f"{where} {self.message}".strip()


class UnknownSymbolError(EplanError):
    """A fluent, agent or object name that is not part of the signature."""


class NotExecutableError(EplanError):
    """The designated event's precondition fails at the designated world."""


class GroundingError(EplanError):
    """Grounding produced too many actions or could not bind a schema."""


class InitialStateError(EplanError):
    """The initial statements do not admit the canonical initial model."""
