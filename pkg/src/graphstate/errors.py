"""Exception hierarchy shared by the engine, the persistence layer and the service.

Every error carries a short machine-readable ``rule`` identifier alongside the
human-readable message; the CLI prints it as an ``error[<rule>]:`` prefix and
the HTTP service returns it in the ``{rule, message, detail}`` error body.
"""
from __future__ import annotations

from typing import Any


class GraphStateError(Exception):
    """Base class for every domain error raised by this package."""

    rule: str = "error"

    def __init__(self, message: str, *, rule: str | None = None, detail: Any = None):
        super().__init__(message)
        if rule is not None:
            self.rule = rule
        self.detail = detail

    @property
    def message(self) -> str:
        return str(self)


class VertexNotFoundError(GraphStateError):
    rule = "not-found"


class EdgeNotFoundError(GraphStateError):
    rule = "not-found"


class LoopEdgeError(GraphStateError):
    rule = "loop"


class DuplicateEdgeError(GraphStateError):
    rule = "duplicate-edge"


class InvalidSpecialNeighbourError(GraphStateError):
    rule = "invalid-special-neighbour"


class ResourceLimitError(GraphStateError):
    rule = "resource-limit"


class ValidationError(GraphStateError):
    """Structural or invariant violation in caller-supplied data.

    ``rule`` is refined per instance, e.g. ``loop``, ``duplicate-edge``,
    ``non-contiguous-labels``, ``malformed``.
    """

    rule = "validation"


class DocumentParseError(GraphStateError):
    """Unparseable document text; carries the source position when known."""

    rule = "parse"

    def __init__(self, message: str, *, line: int | None = None,
                 column: int | None = None, detail: Any = None):
        super().__init__(message, detail=detail)
        self.line = line
        self.column = column


class ScriptParseError(GraphStateError):
    """Unparseable script line; always carries the 1-based line number."""

    rule = "parse"

    def __init__(self, message: str, *, line: int, column: int | None = None,
                 detail: Any = None):
        super().__init__(message, detail=detail)
        self.line = line
        self.column = column


class ScriptRunError(GraphStateError):
    """A script command failed when applied to the graph.

    Inherits the underlying error's rule; records the command index and line.
    """

    def __init__(self, message: str, *, line: int, index: int,
                 cause: GraphStateError, detail: Any = None):
        super().__init__(message, rule=cause.rule, detail=detail)
        self.line = line
        self.index = index
        self.cause = cause


class StepFailedError(GraphStateError):
    """A measurement step inside a sequence failed.

    Carries the 0-based ``index`` of the failing step, the underlying
    ``cause`` and the ``graph`` reached after the last successful step.
    """

    def __init__(self, message: str, *, index: int, cause: GraphStateError,
                 graph: Any, detail: Any = None):
        super().__init__(message, rule=cause.rule, detail=detail)
        self.index = index
        self.cause = cause
        self.graph = graph


class JournalIntegrityError(GraphStateError):
    rule = "journal-integrity"

    def __init__(self, message: str, *, seq: int | None = None, detail: Any = None):
        super().__init__(message, detail=detail)
        self.seq = seq


class ImpossibleOutcomeError(GraphStateError):
    rule = "impossible-outcome"


class RevisionConflictError(GraphStateError):
    rule = "revision-conflict"


class UnknownSessionError(GraphStateError):
    rule = "unknown-session"
