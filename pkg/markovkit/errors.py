"""Exception hierarchy.

Validation operations report problems as ``Violation`` lists; the exceptions
below are raised only for hard errors and violated preconditions.
"""

from typing import Any, Optional


class MarkovError(ValueError):
    """Base class for all markovkit errors."""


class DiagramSyntaxError(MarkovError):
    """Malformed diagram text."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        location: Optional[str] = None,
    ):
        self.line = line
        self.column = column
        self.location = location
        where = ""
        if line is not None:
            where = f" at line {line}, column {column}"
        elif location:
            where = f" at {location}"
        super().__init__(f"SyntaxError{where}: {message}")


class UnknownReference(MarkovError):
    """A document refers to a production (or other named item) that does not exist."""

    def __init__(self, name: str, context: str = ""):
        self.name = name
        suffix = f" in {context}" if context else ""
        super().__init__(f"UnknownReference: {name!r}{suffix}")


class DuplicateName(MarkovError):
    """Two items of one kind share a name."""

    def __init__(self, name: str, kind: str):
        self.name = name
        self.kind = kind
        super().__init__(f"DuplicateName: {kind} {name!r} declared more than once")


class DiagramInvalid(MarkovError):
    """A diagram failed validation where a valid one is required."""

    def __init__(self, report: Any, reason: str = "diagram does not validate"):
        self.report = report
        super().__init__(reason)


class UnintendedCollision(MarkovError):
    """Gluing unification merged cells that no gluing asked to identify."""

    def __init__(self, addresses: list[str], detail: str = ""):
        self.addresses = addresses
        text = ", ".join(addresses)
        super().__init__(f"UnintendedCollision: {text}" + (f" ({detail})" if detail else ""))


class IndexOutOfRange(MarkovError):
    """A level index outside the expanded range."""


class UnknownVertex(MarkovError):
    """A vertex identifier that is not in the graph."""

    def __init__(self, vertex: str):
        self.vertex = vertex
        super().__init__(f"UnknownVertex: {vertex!r}")


class PreconditionFailed(MarkovError):
    """An operation was called on input that does not meet its precondition."""


class ConstructionFailed(MarkovError):
    """Section construction found no consistent choice; this is a gap, not a refutation."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        self.details = details or {}
        super().__init__(f"ConstructionFailed: {message}")


class DivergentTail(MarkovError):
    """The metric schedule has no finite mesh tail."""


class UnsupportedFormat(MarkovError):
    """Unknown export format."""

    def __init__(self, fmt: str):
        self.format = fmt
        super().__init__(f"UnsupportedFormat: {fmt!r}")
