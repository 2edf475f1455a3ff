"""File-backed corpus store: documents, sentence indexes, annotations.

The layout is a single directory so a whole annotation campaign can be
zipped, diffed, and audited:

    <root>/documents.jsonl        one document record per line
    <root>/sentences/<doc>.jsonl  the frozen sentence index per document
    <root>/annotations.jsonl      append-only log of annotation records
    <root>/sessions/<id>.json     workflow session snapshots
    <root>/.lock                  single-writer lockfile

Annotation records are never rewritten; the live state of a
(document, sentence, annotator) key is simply its highest revision.
Appends are flushed and fsynced before the new revision number is
returned, and a torn trailing line left by a crash is truncated away on
the next open, so a reader only ever sees whole records.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

from .corpus import Document, Sentence
from .errors import (
    DocumentNotFound,
    SchemaViolation,
    SessionNotFound,
    StorageFailure,
    UnknownFormat,
)
from .schema import (
    EventType,
    InformationType,
    SentenceAnnotation,
    validate_annotation,
)
from .workflow import SessionState

_INFO_ORDER = {label: i for i, label in enumerate(InformationType)}

# Wire keys of one exported annotation record, in emission order.
WIRE_KEYS = (
    "doc_id",
    "sentence_index",
    "annotator",
    "event_type",
    "information_type",
    "candidates",
    "override",
    "timestamp",
    "revision",
)


@dataclass(frozen=True)
class AnnotationRecord:
    """A SentenceAnnotation plus its session bookkeeping markers."""

    annotation: SentenceAnnotation
    override: bool = False
    amendment_of: Optional[int] = None  # revision this record amends, if any

    @property
    def key(self) -> tuple[str, int, str]:
        ann = self.annotation
        return (ann.doc_id, ann.sentence_index, ann.annotator_id)


def _parse_timestamp(raw: str) -> datetime:
    # RFC 3339 allows a literal Z suffix that fromisoformat only accepts
    # from Python 3.11 on.
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    return datetime.fromisoformat(raw)


def record_to_wire(record: AnnotationRecord) -> dict:
    """Serialize to the canonical export schema (fixed keys and order)."""
    ann = record.annotation
    candidates = None
    if ann.candidates is not None:
        candidates = [
            lb.value for lb in sorted(ann.candidates, key=lambda lb: _INFO_ORDER[lb])
        ]
    return {
        "doc_id": ann.doc_id,
        "sentence_index": ann.sentence_index,
        "annotator": ann.annotator_id,
        "event_type": ann.event_type.value,
        "information_type": ann.information_type.value if ann.information_type else None,
        "candidates": candidates,
        "override": record.override,
        "timestamp": ann.timestamp.isoformat() if ann.timestamp else None,
        "revision": ann.revision,
    }


def record_from_wire(raw: dict) -> AnnotationRecord:
    info = raw.get("information_type")
    candidates = raw.get("candidates")
    timestamp = raw.get("timestamp")
    annotation = SentenceAnnotation(
        doc_id=raw["doc_id"],
        sentence_index=raw["sentence_index"],
        annotator_id=raw["annotator"],
        event_type=EventType(raw["event_type"]),
        information_type=InformationType(info) if info else None,
        candidates=frozenset(InformationType(c) for c in candidates)
        if candidates
        else None,
        timestamp=_parse_timestamp(timestamp) if timestamp else None,
        revision=raw.get("revision", 0),
    )
    return AnnotationRecord(
        annotation=annotation,
        override=bool(raw.get("override", False)),
        amendment_of=raw.get("amendment_of"),
    )


def _wire_line(record: AnnotationRecord, internal: bool = False) -> str:
    payload = record_to_wire(record)
    if internal and record.amendment_of is not None:
        payload["amendment_of"] = record.amendment_of
    return json.dumps(payload, ensure_ascii=False)


class AnnotationStore:
    """Durable single-directory store with one in-process writer.

    Reads are plain file scans and safe from any number of processes;
    writes go through an internal mutex.  Cross-process write exclusion
    is the CLI/service's job (see the .lock file handling there).
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.sentences_dir = self.root / "sentences"
        self.sessions_dir = self.root / "sessions"
        for directory in (self.root, self.sentences_dir, self.sessions_dir):
            directory.mkdir(parents=True, exist_ok=True)
        self.documents_path = self.root / "documents.jsonl"
        self.annotations_path = self.root / "annotations.jsonl"
        self._write_lock = threading.Lock()
        self._documents: dict[str, Document] = {}
        self._records: list[AnnotationRecord] = []
        self._max_revision: dict[tuple[str, int, str], int] = {}
        self._load()

    @property
    def lock_path(self) -> Path:
        return self.root / ".lock"

    # -- loading ---------------------------------------------------------

    def _load(self) -> None:
        self._documents.clear()
        for raw in self._read_jsonl(self.documents_path):
            doc = Document(
                id=raw["id"],
                title=raw["title"],
                source=raw["source"],
                publication_date=datetime.strptime(
                    raw["publication_date"], "%Y-%m-%d"
                ).date(),
                body=raw["body"],
                url=raw.get("url"),
            )
            self._documents[doc.id] = doc
        self._records = [
            record_from_wire(raw) for raw in self._read_jsonl(self.annotations_path)
        ]
        self._max_revision.clear()
        for record in self._records:
            key = record.key
            current = self._max_revision.get(key, 0)
            self._max_revision[key] = max(current, record.annotation.revision)

    def _read_jsonl(self, path: Path) -> list[dict]:
        """Read whole records; truncate a torn trailing line in place.

        A crash mid-append can only damage the end of the file.  Anything
        malformed before the last line means real corruption and raises.
        """
        if not path.exists():
            return []
        data = path.read_bytes()
        records: list[dict] = []
        good = 0
        offset = 0
        lines = data.split(b"\n")
        for i, chunk in enumerate(lines):
            is_last = i == len(lines) - 1
            if not chunk.strip():
                offset += len(chunk) + 1
                continue
            terminated = not is_last
            try:
                parsed = json.loads(chunk.decode("utf-8"))
                if not isinstance(parsed, dict):
                    raise ValueError("record must be an object")
            except (ValueError, UnicodeDecodeError) as exc:
                if terminated:
                    raise StorageFailure(f"corrupt record in {path.name}: {exc}") from exc
                break  # torn tail from an interrupted append
            if not terminated:
                break  # complete JSON but no newline: the append was cut short
            records.append(parsed)
            offset += len(chunk) + 1
            good = offset
        if good < len(data):
            with open(path, "r+b") as handle:
                handle.truncate(good)
        return records

    @staticmethod
    def _append_line(path: Path, line: str) -> None:
        try:
            with open(path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise StorageFailure(f"cannot append to {path}: {exc}") from exc

    # -- documents -------------------------------------------------------

    def add_document(self, doc: Document, sentences: Iterable[Sentence]) -> bool:
        """Store a document with its sentence index; False if the id exists."""
        with self._write_lock:
            if doc.id in self._documents:
                return False
            sentence_list = list(sentences)
            sentence_path = self.sentences_dir / f"{doc.id}.jsonl"
            tmp = sentence_path.with_suffix(".jsonl.tmp")
            try:
                with open(tmp, "w", encoding="utf-8") as handle:
                    for sentence in sentence_list:
                        handle.write(
                            json.dumps(sentence.to_record(), ensure_ascii=False) + "\n"
                        )
                    handle.flush()
                    os.fsync(handle.fileno())
                os.replace(tmp, sentence_path)
            except OSError as exc:
                raise StorageFailure(f"cannot write sentence index: {exc}") from exc
            self._append_line(
                self.documents_path, json.dumps(doc.to_record(), ensure_ascii=False)
            )
            self._documents[doc.id] = doc
            return True

    def has_document(self, doc_id: str) -> bool:
        return doc_id in self._documents

    def get_document(self, doc_id: str) -> Document:
        try:
            return self._documents[doc_id]
        except KeyError:
            raise DocumentNotFound(f"unknown document id {doc_id!r}") from None

    def list_documents(self) -> list[Document]:
        return sorted(self._documents.values(), key=lambda d: d.id)

    def get_sentences(self, doc_id: str) -> list[Sentence]:
        if doc_id not in self._documents:
            raise DocumentNotFound(f"unknown document id {doc_id!r}")
        path = self.sentences_dir / f"{doc_id}.jsonl"
        return [
            Sentence(
                doc_id=raw["doc_id"],
                index=raw["index"],
                char_start=raw["char_start"],
                char_end=raw["char_end"],
                text=raw["text"],
            )
            for raw in self._read_jsonl(path)
        ]

    # -- annotations -----------------------------------------------------

    def put_annotation(self, record: AnnotationRecord) -> int:
        """Append a record under the next revision for its key.

        Validation runs in lenient mode: mid-workflow records made during
        the event pass legitimately lack an information type, while the
        hard label rules (E1-E3) always hold.  The record is durable on
        disk before the revision number is returned.
        """
        result = validate_annotation(record.annotation, "lenient")
        if not result.ok:
            raise SchemaViolation(result)
        with self._write_lock:
            key = record.key
            revision = self._max_revision.get(key, 0) + 1
            ann = record.annotation
            stored = AnnotationRecord(
                annotation=SentenceAnnotation(
                    doc_id=ann.doc_id,
                    sentence_index=ann.sentence_index,
                    annotator_id=ann.annotator_id,
                    event_type=ann.event_type,
                    information_type=ann.information_type,
                    candidates=ann.candidates,
                    timestamp=ann.timestamp or datetime.now(timezone.utc),
                    revision=revision,
                ),
                override=record.override,
                amendment_of=record.amendment_of,
            )
            self._append_line(self.annotations_path, _wire_line(stored, internal=True))
            self._records.append(stored)
            self._max_revision[key] = revision
            return revision

    def import_records(self, lines: Iterable[str]) -> int:
        """Re-ingest previously exported records, keeping their revisions.

        Used for restoring an export into a fresh store; incoming
        revisions must stay above anything already present for the key.
        """
        count = 0
        with self._write_lock:
            for line in lines:
                if not line.strip():
                    continue
                record = record_from_wire(json.loads(line))
                result = validate_annotation(record.annotation, "lenient")
                if not result.ok:
                    raise SchemaViolation(result)
                key = record.key
                if record.annotation.revision <= self._max_revision.get(key, 0):
                    raise StorageFailure(
                        f"revision {record.annotation.revision} for {key} is not "
                        "above the stored history"
                    )
                self._append_line(self.annotations_path, _wire_line(record, internal=True))
                self._records.append(record)
                self._max_revision[key] = record.annotation.revision
                count += 1
        return count

    def history(self, doc_id: str, sentence_index: int, annotator: str) -> list[AnnotationRecord]:
        """Full ordered revision history of one key."""
        wanted = (doc_id, sentence_index, annotator)
        return sorted(
            (r for r in self._records if r.key == wanted),
            key=lambda r: r.annotation.revision,
        )

    def latest_records(
        self,
        annotator: Optional[str] = None,
        doc_id: Optional[str] = None,
    ) -> list[AnnotationRecord]:
        """Latest revision per key, in the canonical export order."""
        latest: dict[tuple[str, int, str], AnnotationRecord] = {}
        for record in self._records:
            if annotator is not None and record.annotation.annotator_id != annotator:
                continue
            if doc_id is not None and record.annotation.doc_id != doc_id:
                continue
            current = latest.get(record.key)
            if current is None or record.annotation.revision > current.annotation.revision:
                latest[record.key] = record
        return [latest[key] for key in sorted(latest)]

    # -- export ----------------------------------------------------------

    def export_corpus(
        self,
        format: str = "jsonl",
        annotator: Optional[str] = None,
        doc_id: Optional[str] = None,
    ) -> bytes:
        """Serialize the latest annotation state of the store.

        jsonl output is canonical and loss-free; tsv is a flat convenience
        view with the sentence text joined in.
        """
        records = self.latest_records(annotator=annotator, doc_id=doc_id)
        if format == "jsonl":
            return "".join(_wire_line(r) + "\n" for r in records).encode("utf-8")
        if format == "tsv":
            sentence_cache: dict[str, dict[int, str]] = {}
            rows = ["doc_id\tsentence_index\tannotator\tevent_type\tinformation_type\ttext"]
            for record in records:
                ann = record.annotation
                if ann.doc_id not in sentence_cache:
                    sentence_cache[ann.doc_id] = {
                        s.index: s.text for s in self.get_sentences(ann.doc_id)
                    }
                try:
                    text = sentence_cache[ann.doc_id][ann.sentence_index]
                except KeyError:
                    raise StorageFailure(
                        f"annotation refers to unknown sentence "
                        f"{ann.doc_id}#{ann.sentence_index}"
                    ) from None
                text = text.replace("\t", " ").replace("\n", " ")
                rows.append(
                    "\t".join(
                        [
                            ann.doc_id,
                            str(ann.sentence_index),
                            ann.annotator_id,
                            ann.event_type.value,
                            ann.information_type.value if ann.information_type else "",
                            text,
                        ]
                    )
                )
            return ("\n".join(rows) + "\n").encode("utf-8")
        raise UnknownFormat(f"unknown export format {format!r} (use jsonl or tsv)")

    def corpus_stats(
        self,
        annotator: Optional[str] = None,
        doc_id: Optional[str] = None,
    ) -> dict:
        """Label distribution over the latest revisions in scope."""
        records = self.latest_records(annotator=annotator, doc_id=doc_id)
        event_counts = {e.value: 0 for e in EventType}
        info_counts = {i.value: 0 for i in InformationType}
        info_absent = 0
        pair_counts: dict[str, int] = {}
        per_annotator: dict[str, int] = {}
        for record in records:
            ann = record.annotation
            event_counts[ann.event_type.value] += 1
            if ann.information_type is None:
                info_absent += 1
            else:
                info_counts[ann.information_type.value] += 1
            per_annotator[ann.annotator_id] = per_annotator.get(ann.annotator_id, 0) + 1
            complete = (
                ann.event_type is EventType.IRRELEVANT or ann.information_type is not None
            )
            if complete:
                pair = f"{ann.event_type.value}|{ann.information_type.value if ann.information_type else ''}"
                pair_counts[pair] = pair_counts.get(pair, 0) + 1
        return {
            "n_records": len(records),
            "event_type": event_counts,
            "information_type": info_counts,
            "information_type_absent": info_absent,
            "pairs": dict(sorted(pair_counts.items())),
            "annotators": dict(sorted(per_annotator.items())),
        }

    # -- sessions --------------------------------------------------------

    def save_session(self, session_id: str, state: SessionState) -> None:
        path = self.sessions_dir / f"{session_id}.json"
        tmp = path.with_suffix(".json.tmp")
        try:
            with open(tmp, "w", encoding="utf-8") as handle:
                json.dump(state.to_dict(), handle, ensure_ascii=False)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageFailure(f"cannot persist session {session_id}: {exc}") from exc

    def load_session(self, session_id: str) -> SessionState:
        path = self.sessions_dir / f"{session_id}.json"
        if not path.exists():
            raise SessionNotFound(f"unknown session id {session_id!r}")
        with open(path, encoding="utf-8") as handle:
            return SessionState.from_dict(json.load(handle))

    def list_sessions(self, annotator: Optional[str] = None) -> dict[str, SessionState]:
        sessions: dict[str, SessionState] = {}
        for path in sorted(self.sessions_dir.glob("*.json")):
            state = SessionState.from_dict(json.loads(path.read_text(encoding="utf-8")))
            if annotator is None or state.annotator_id == annotator:
                sessions[path.stem] = state
        return sessions
