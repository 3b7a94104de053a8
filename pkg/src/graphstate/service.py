"""Session-oriented HTTP API exposing the engine to the interactive editor.

One mutable document per session, mutations serialized per session and guarded
by an optimistic revision token: a mutating request must carry the revision it
saw, and exactly one of two racing writers with the same token wins. Every
error response has the shape ``{"rule": ..., "message": ..., "detail": ...}``.

Endpoints::

    POST /sessions                   create (body: optional document)
    GET  /sessions/{id}/graph        current document view + revision
    POST /sessions/{id}/ops          apply {kind, args, expected_revision}
    GET  /sessions/{id}/journal      operation journal
    GET  /sessions/{id}/save         canonical document bytes
    PUT  /sessions/{id}/load         replace the document, revision resets to 0
"""
from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Any

from fastapi import Body, FastAPI, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import persistence
from .errors import (
    GraphStateError,
    RevisionConflictError,
    UnknownSessionError,
    ValidationError,
)
from .persistence import GraphDocument

_STATUS_BY_RULE = {
    "unknown-session": 404,
    "revision-conflict": 409,
}


@dataclass
class Session:
    id: str
    doc: GraphDocument
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory session map; sessions live until the process exits."""

    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, doc: GraphDocument) -> Session:
        session = Session(id=uuid.uuid4().hex, doc=doc)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        return session


def _validated_document(body: Any) -> GraphDocument:
    doc = persistence.document_from_jsonable(body)
    persistence.replay(doc)  # a document whose journal lies is not accepted
    return doc


def create_app() -> FastAPI:
    app = FastAPI(title="graph-state session service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore()
    app.state.store = store

    @app.exception_handler(GraphStateError)
    def handle_domain_error(_request, exc: GraphStateError) -> JSONResponse:
        status = _STATUS_BY_RULE.get(exc.rule, 422)
        return JSONResponse(
            status_code=status,
            content={"rule": exc.rule, "message": str(exc), "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    def handle_body_error(_request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"rule": "parse", "message": "request body is not valid JSON",
                     "detail": str(exc.errors()[:1])},
        )

    @app.post("/sessions", status_code=201)
    def create_session(body: dict | None = Body(default=None)) -> dict:
        doc = GraphDocument() if body is None else _validated_document(body)
        session = store.create(doc)
        return {"session_id": session.id, "revision": session.revision}

    @app.get("/sessions/{session_id}/graph")
    def get_graph(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            return {
                "document": persistence.document_to_jsonable(session.doc),
                "revision": session.revision,
            }

    @app.post("/sessions/{session_id}/ops")
    def apply_operation(session_id: str, body: dict = Body(...)) -> dict:
        session = store.get(session_id)
        kind = body.get("kind")
        if not isinstance(kind, str):
            raise ValidationError(f"op kind must be a string, got {kind!r}",
                                  rule="malformed")
        args = body.get("args", {})
        if not isinstance(args, dict):
            raise ValidationError(f"op args must be an object, got {args!r}",
                                  rule="malformed")
        expected = body.get("expected_revision")
        if not isinstance(expected, int) or isinstance(expected, bool):
            raise ValidationError(
                f"expected_revision must be an integer, got {expected!r}",
                rule="malformed",
            )
        with session.lock:
            if expected != session.revision:
                raise RevisionConflictError(
                    f"expected revision {expected}, session is at {session.revision}",
                    detail={"current_revision": session.revision},
                )
            new_doc, label_map = persistence.record_op(session.doc, kind, args)
            session.doc = new_doc
            session.revision += 1
            return {
                "graph": persistence._graph_to_jsonable(new_doc.graph),
                "label_map": [list(p) for p in label_map.pairs],
                "revision": session.revision,
            }

    @app.get("/sessions/{session_id}/journal")
    def get_journal(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            return {
                "journal": [persistence._record_to_jsonable(r)
                            for r in session.doc.journal.records],
                "revision": session.revision,
            }

    @app.get("/sessions/{session_id}/save")
    def save(session_id: str) -> Response:
        session = store.get(session_id)
        with session.lock:
            payload = persistence.serialize(session.doc)
        return Response(content=payload, media_type="application/json")

    @app.put("/sessions/{session_id}/load")
    def load(session_id: str, body: dict = Body(...)) -> dict:
        session = store.get(session_id)
        doc = _validated_document(body)
        with session.lock:
            session.doc = doc
            session.revision = 0
            return {"revision": session.revision}

    return app
