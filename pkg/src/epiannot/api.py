"""JSON-over-HTTP API consumed by the annotation console.

The endpoints mirror the workflow phases one-to-one, so a client cannot
bypass the protocol: sessions are created against a stored document,
reading must be acknowledged before labels open up, and every label
mutation is validated and persisted before it is acknowledged.

Handlers hold no state of their own: documents, annotations, and
session snapshots all live in the store, so restarting the service
loses nothing.  Requests that touch the same session are serialized;
everything else runs concurrently.
"""

from __future__ import annotations

import threading
import uuid
from collections import defaultdict
from datetime import datetime, timezone
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import agreement, workflow
from .errors import AnnotationError, SchemaViolation, UnknownLabel
from .schema import (
    EventType,
    InformationType,
    SentenceAnnotation,
    label_help,
    resolve_primary_label,
)
from .store import AnnotationRecord, AnnotationStore

_STATUS_BY_CODE = {
    "DocumentNotFound": 404,
    "SessionNotFound": 404,
    "UnknownLabel": 404,
    "WrongPhase": 409,
    "StorageFailure": 500,
    "StoreLocked": 500,
}


def _api_error(code: str, message: str, details: Optional[dict] = None) -> JSONResponse:
    status = _STATUS_BY_CODE.get(code, 400)
    payload: dict = {"code": code, "message": message}
    if details is not None:
        payload["details"] = details
    return JSONResponse(status_code=status, content=payload)


class SessionCreate(BaseModel):
    doc_id: str
    annotator: str


class EventLabelBody(BaseModel):
    sentence_index: int
    label: str


class InfoLabelBody(BaseModel):
    sentence_index: int
    label: str
    candidates: Optional[list[str]] = None
    override: bool = False


class ResolveBody(BaseModel):
    candidates: list[str]


def _session_view(session_id: str, state: workflow.SessionState) -> dict:
    view = state.to_dict()
    view["id"] = session_id
    view["pending_info_indices"] = sorted(state.pending_info_indices())
    return view


def create_app(store_root: str, ui_dir: Optional[str] = None) -> FastAPI:
    store = AnnotationStore(store_root)
    app = FastAPI(title="epiannot", docs_url=None, redoc_url=None)
    session_locks: defaultdict[str, threading.Lock] = defaultdict(threading.Lock)

    @app.exception_handler(AnnotationError)
    async def annotation_error_handler(_: Request, exc: AnnotationError):
        details = exc.result.to_dict() if isinstance(exc, SchemaViolation) else None
        return _api_error(exc.code, str(exc), details)

    @app.exception_handler(RequestValidationError)
    async def request_error_handler(_: Request, exc: RequestValidationError):
        return _api_error("InvalidRequest", str(exc))

    @app.exception_handler(ValueError)
    async def value_error_handler(_: Request, exc: ValueError):
        return _api_error("InvalidRequest", str(exc))

    def parse_event(value: str) -> EventType:
        try:
            return EventType(value)
        except ValueError:
            raise UnknownLabel(f"not an event type: {value!r}") from None

    def parse_info(value: str) -> InformationType:
        try:
            return InformationType(value)
        except ValueError:
            raise UnknownLabel(f"not an information type: {value!r}") from None

    @app.get("/api/documents")
    def list_documents():
        return [
            {
                "id": doc.id,
                "title": doc.title,
                "source": doc.source,
                "url": doc.url,
                "publication_date": doc.publication_date.isoformat(),
            }
            for doc in store.list_documents()
        ]

    @app.get("/api/documents/{doc_id}")
    def get_document(doc_id: str):
        return store.get_document(doc_id).to_record()

    @app.get("/api/documents/{doc_id}/sentences")
    def get_sentences(doc_id: str):
        return [s.to_record() for s in store.get_sentences(doc_id)]

    @app.post("/api/sessions")
    def create_session(body: SessionCreate):
        doc = store.get_document(body.doc_id)
        sentences = store.get_sentences(body.doc_id)
        state = workflow.create_session(doc, sentences, body.annotator)
        session_id = uuid.uuid4().hex
        store.save_session(session_id, state)
        return _session_view(session_id, state)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_view(session_id, store.load_session(session_id))

    @app.post("/api/sessions/{session_id}/ack-reading")
    def ack_reading(session_id: str):
        with session_locks[session_id]:
            state = workflow.acknowledge_reading(store.load_session(session_id))
            store.save_session(session_id, state)
            return _session_view(session_id, state)

    @app.put("/api/sessions/{session_id}/event-label")
    def put_event_label(session_id: str, body: EventLabelBody):
        label = parse_event(body.label)
        with session_locks[session_id]:
            state = store.load_session(session_id)
            state = workflow.set_event_label(state, body.sentence_index, label)
            revision = store.put_annotation(
                AnnotationRecord(
                    annotation=SentenceAnnotation(
                        doc_id=state.doc_id,
                        sentence_index=body.sentence_index,
                        annotator_id=state.annotator_id,
                        event_type=label,
                        timestamp=datetime.now(timezone.utc),
                    )
                )
            )
            store.save_session(session_id, state)
            view = _session_view(session_id, state)
            view["revision"] = revision
            return view

    @app.put("/api/sessions/{session_id}/info-label")
    def put_info_label(session_id: str, body: InfoLabelBody):
        label = parse_info(body.label)
        candidates = (
            frozenset(parse_info(c) for c in body.candidates)
            if body.candidates is not None
            else None
        )
        with session_locks[session_id]:
            state = store.load_session(session_id)
            state = workflow.set_info_label(
                state, body.sentence_index, label, candidates, body.override
            )
            revision = store.put_annotation(
                AnnotationRecord(
                    annotation=SentenceAnnotation(
                        doc_id=state.doc_id,
                        sentence_index=body.sentence_index,
                        annotator_id=state.annotator_id,
                        event_type=state.event_labels[body.sentence_index],
                        information_type=label,
                        candidates=candidates,
                        timestamp=datetime.now(timezone.utc),
                    ),
                    override=body.sentence_index in state.overrides,
                )
            )
            store.save_session(session_id, state)
            view = _session_view(session_id, state)
            view["revision"] = revision
            return view

    @app.post("/api/resolve")
    def resolve(body: ResolveBody):
        candidates = frozenset(parse_info(c) for c in body.candidates)
        return resolve_primary_label(candidates).to_dict()

    @app.get("/api/help/{label}")
    def get_help(label: str):
        return {"label": label, "help": label_help(label)}

    @app.get("/api/agreement")
    def get_agreement(a: str, b: str, level: str = "event"):
        records_a = store.latest_records(annotator=a)
        records_b = store.latest_records(annotator=b)
        if level == "event":
            return agreement.agreement_report(records_a, records_b, "event").to_dict()
        if level == "info":
            return {
                "level": "info",
                "modes": {
                    mode: agreement.agreement_report(
                        records_a, records_b, "info", mode
                    ).to_dict()
                    for mode in ("exclude", "inclusive")
                },
            }
        raise ValueError(f"unknown agreement level {level!r} (use event or info)")

    @app.get("/api/progress")
    def get_progress(annotator: str):
        sessions = []
        for session_id, state in store.list_sessions(annotator=annotator).items():
            sessions.append(
                {
                    "session_id": session_id,
                    "doc_id": state.doc_id,
                    "phase": state.phase.value,
                    "n_sentences": state.n_sentences,
                    "event_labeled": len(state.event_labels),
                    "info_labeled": len(state.info_labels),
                }
            )
        return {
            "annotator": annotator,
            "documents_total": len(store.list_documents()),
            "sessions": sessions,
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    app.state.store = store
    return app
