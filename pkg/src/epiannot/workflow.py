"""Single-annotator session protocol over one document.

The guided workflow runs through fixed phases: read the metadata, read
the whole article, label every sentence's event type, then label the
information type of every non-irrelevant sentence.  Operations are pure:
each returns a fresh SessionState, so replaying a log of operations
always reproduces the same final state, and the phase field never moves
backwards.

Earlier passes can only be revisited through an explicit amendment,
which is recorded on the session rather than rewinding its phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum
from typing import Iterable, Optional

from .corpus import Document, Sentence
from .errors import (
    EmptySentenceList,
    IndexOutOfRange,
    IrrelevantSentence,
    OverrideRequired,
    SchemaViolation,
    WrongPhase,
)
from .schema import (
    DEFAULT_POLICY,
    EventType,
    InformationType,
    PrecedencePolicy,
    resolve_primary_label,
    validate_pair,
)


class Phase(str, Enum):
    METADATA_READ = "metadata_read"
    ARTICLE_READ = "article_read"
    EVENT_PASS = "event_pass"
    INFO_PASS = "info_pass"
    COMPLETE = "complete"


_PHASE_ORDER = {phase: i for i, phase in enumerate(Phase)}


@dataclass(frozen=True)
class Amendment:
    """Record of an event label changed after the event pass closed."""

    sentence_index: int
    previous_event: EventType
    new_event: EventType


@dataclass(frozen=True)
class SessionState:
    doc_id: str
    annotator_id: str
    n_sentences: int
    reference_date: date  # always the document's publication date
    phase: Phase = Phase.METADATA_READ
    event_labels: dict[int, EventType] = field(default_factory=dict)
    info_labels: dict[int, InformationType] = field(default_factory=dict)
    candidates: dict[int, frozenset[InformationType]] = field(default_factory=dict)
    overrides: frozenset[int] = frozenset()
    amendments: tuple[Amendment, ...] = ()
    relaxed: bool = False

    def pending_info_indices(self) -> set[int]:
        """Sentences that still need an information label."""
        return {
            i
            for i, label in self.event_labels.items()
            if label is not EventType.IRRELEVANT and i not in self.info_labels
        }

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "annotator_id": self.annotator_id,
            "n_sentences": self.n_sentences,
            "reference_date": self.reference_date.isoformat(),
            "phase": self.phase.value,
            "event_labels": {str(i): lb.value for i, lb in sorted(self.event_labels.items())},
            "info_labels": {str(i): lb.value for i, lb in sorted(self.info_labels.items())},
            "candidates": {
                str(i): sorted(lb.value for lb in cands)
                for i, cands in sorted(self.candidates.items())
            },
            "overrides": sorted(self.overrides),
            "amendments": [
                {
                    "sentence_index": a.sentence_index,
                    "previous_event": a.previous_event.value,
                    "new_event": a.new_event.value,
                }
                for a in self.amendments
            ],
            "relaxed": self.relaxed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionState":
        return cls(
            doc_id=data["doc_id"],
            annotator_id=data["annotator_id"],
            n_sentences=data["n_sentences"],
            reference_date=date.fromisoformat(data["reference_date"]),
            phase=Phase(data["phase"]),
            event_labels={int(i): EventType(lb) for i, lb in data["event_labels"].items()},
            info_labels={int(i): InformationType(lb) for i, lb in data["info_labels"].items()},
            candidates={
                int(i): frozenset(InformationType(lb) for lb in cands)
                for i, cands in data.get("candidates", {}).items()
            },
            overrides=frozenset(data.get("overrides", [])),
            amendments=tuple(
                Amendment(
                    sentence_index=a["sentence_index"],
                    previous_event=EventType(a["previous_event"]),
                    new_event=EventType(a["new_event"]),
                )
                for a in data.get("amendments", [])
            ),
            relaxed=data.get("relaxed", False),
        )


def create_session(
    doc: Document,
    sentences: Iterable[Sentence],
    annotator_id: str,
    relaxed: bool = False,
) -> SessionState:
    """Open a session in the metadata-reading phase.

    The reference date is pinned to the document's publication date and
    never changes for the life of the session.
    """
    sentence_list = list(sentences)
    if not sentence_list:
        raise EmptySentenceList(f"document {doc.id!r} has no sentences to annotate")
    if any(s.doc_id != doc.id for s in sentence_list):
        raise ValueError("sentences do not belong to the given document")
    return SessionState(
        doc_id=doc.id,
        annotator_id=annotator_id,
        n_sentences=len(sentence_list),
        reference_date=doc.publication_date,
        relaxed=relaxed,
    )


def acknowledge_reading(session: SessionState) -> SessionState:
    """Advance through the two reading steps (metadata, full article)."""
    if session.phase is Phase.METADATA_READ:
        return replace(session, phase=Phase.ARTICLE_READ)
    if session.phase is Phase.ARTICLE_READ:
        return replace(session, phase=Phase.EVENT_PASS)
    raise WrongPhase(f"nothing to acknowledge in phase {session.phase.value!r}")


def _check_index(session: SessionState, sentence_index: int) -> None:
    if not 0 <= sentence_index < session.n_sentences:
        raise IndexOutOfRange(
            f"sentence index {sentence_index} out of range "
            f"(document has {session.n_sentences} sentences)"
        )


def _advance(session: SessionState) -> SessionState:
    """Move the phase forward wherever coverage allows it."""
    phase = session.phase
    total = len(session.event_labels) == session.n_sentences
    if phase is Phase.EVENT_PASS and total:
        phase = Phase.INFO_PASS
    if phase is Phase.INFO_PASS and total and not session.pending_info_indices():
        # A document whose sentences are all irrelevant finishes here
        # without a single information label.
        phase = Phase.COMPLETE
    if phase is session.phase:
        return session
    return replace(session, phase=phase)


def set_event_label(
    session: SessionState, sentence_index: int, label: EventType
) -> SessionState:
    """Assign (or overwrite) an event label during the event pass.

    Once every sentence is labelled the session advances to the
    information pass; after that, event labels only change through
    amend_event_label.
    """
    allowed = {Phase.EVENT_PASS}
    if session.relaxed:
        allowed.add(Phase.INFO_PASS)
    if session.phase not in allowed:
        raise WrongPhase(
            f"event labels can only be set during the event pass "
            f"(session is in {session.phase.value!r})"
        )
    _check_index(session, sentence_index)
    event_labels = dict(session.event_labels)
    event_labels[sentence_index] = label
    updated = replace(session, event_labels=event_labels)
    if label is EventType.IRRELEVANT and sentence_index in session.info_labels:
        info_labels = dict(updated.info_labels)
        del info_labels[sentence_index]
        updated = replace(updated, info_labels=info_labels)
    return _advance(updated)


def set_info_label(
    session: SessionState,
    sentence_index: int,
    label: InformationType,
    candidates: Optional[Iterable[InformationType]] = None,
    override: bool = False,
    policy: PrecedencePolicy = DEFAULT_POLICY,
) -> SessionState:
    """Assign an information label during the information pass.

    Irrelevant sentences are rejected outright.  When a candidate set is
    given the label must match the resolver's pick unless the annotator
    explicitly overrides; overrides are recorded on the session.  The
    label pair must not validate as an error.  Covering the last pending
    sentence completes the session.
    """
    allowed = {Phase.INFO_PASS}
    if session.relaxed:
        allowed.add(Phase.EVENT_PASS)
    if session.phase not in allowed:
        raise WrongPhase(
            f"information labels can only be set during the information pass "
            f"(session is in {session.phase.value!r})"
        )
    _check_index(session, sentence_index)
    event_label = session.event_labels.get(sentence_index)
    if event_label is None:
        # Only reachable in relaxed mode; the strict protocol guarantees
        # full event coverage before the information pass opens.
        raise WrongPhase(f"sentence {sentence_index} has no event label yet")
    if event_label is EventType.IRRELEVANT:
        raise IrrelevantSentence(
            f"sentence {sentence_index} is labelled irrelevant and takes no "
            "information type"
        )

    cand_set: Optional[frozenset[InformationType]] = None
    if candidates is not None:
        cand_set = frozenset(candidates)
        if len(cand_set) < 2:
            raise ValueError("a candidate set needs at least 2 labels")
        if label not in cand_set:
            raise ValueError("the chosen label must be one of the candidates")
        resolution = resolve_primary_label(cand_set, policy)
        if resolution.main is not label and not override:
            raise OverrideRequired(
                f"resolver picked {resolution.main.value!r} for these candidates; "
                "pass override=True to keep the manual choice"
            )

    result = validate_pair(event_label, label, "strict")
    if not result.ok:
        raise SchemaViolation(result)

    info_labels = dict(session.info_labels)
    info_labels[sentence_index] = label
    cand_map = dict(session.candidates)
    overrides = set(session.overrides)
    if cand_set is not None:
        cand_map[sentence_index] = cand_set
        if override:
            overrides.add(sentence_index)
    else:
        cand_map.pop(sentence_index, None)
        overrides.discard(sentence_index)
    updated = replace(
        session,
        info_labels=info_labels,
        candidates=cand_map,
        overrides=frozenset(overrides),
    )
    return _advance(updated)


def amend_event_label(
    session: SessionState,
    sentence_index: int,
    label: EventType,
    info_label: Optional[InformationType] = None,
    candidates: Optional[Iterable[InformationType]] = None,
    override: bool = False,
    policy: PrecedencePolicy = DEFAULT_POLICY,
) -> SessionState:
    """Change an event label after the event pass closed.

    The change is recorded as an amendment; the session phase never
    moves backwards.  In the complete phase the amended sentence must
    stay complete, so switching away from irrelevant requires an
    accompanying information label.
    """
    if session.phase not in (Phase.INFO_PASS, Phase.COMPLETE):
        raise WrongPhase(
            "amendments only apply once the event pass is closed "
            f"(session is in {session.phase.value!r})"
        )
    _check_index(session, sentence_index)
    previous = session.event_labels[sentence_index]

    new_info: Optional[InformationType]
    if label is EventType.IRRELEVANT:
        new_info = None
    elif info_label is not None:
        new_info = info_label
    else:
        new_info = session.info_labels.get(sentence_index)

    strictness = "strict" if session.phase is Phase.COMPLETE else "lenient"
    result = validate_pair(label, new_info, strictness)
    if not result.ok:
        raise SchemaViolation(result)

    cand_set: Optional[frozenset[InformationType]] = None
    if candidates is not None and new_info is not None:
        cand_set = frozenset(candidates)
        if len(cand_set) < 2:
            raise ValueError("a candidate set needs at least 2 labels")
        if new_info not in cand_set:
            raise ValueError("the chosen label must be one of the candidates")
        resolution = resolve_primary_label(cand_set, policy)
        if resolution.main is not new_info and not override:
            raise OverrideRequired(
                f"resolver picked {resolution.main.value!r} for these candidates; "
                "pass override=True to keep the manual choice"
            )

    event_labels = dict(session.event_labels)
    event_labels[sentence_index] = label
    info_labels = dict(session.info_labels)
    cand_map = dict(session.candidates)
    overrides = set(session.overrides)
    if new_info is None:
        info_labels.pop(sentence_index, None)
        cand_map.pop(sentence_index, None)
        overrides.discard(sentence_index)
    else:
        info_labels[sentence_index] = new_info
        if cand_set is not None:
            cand_map[sentence_index] = cand_set
            if override:
                overrides.add(sentence_index)

    updated = replace(
        session,
        event_labels=event_labels,
        info_labels=info_labels,
        candidates=cand_map,
        overrides=frozenset(overrides),
        amendments=session.amendments
        + (Amendment(sentence_index, previous, label),),
    )
    return _advance(updated)


def completion_diagnostics(session: SessionState) -> list[str]:
    """Whole-session consistency check for the complete phase.

    Returns human-readable problems; empty means the session satisfies
    the completion contract (full event coverage, information labels on
    exactly the non-irrelevant sentences, no pair validating as error).
    """
    problems: list[str] = []
    if session.phase is not Phase.COMPLETE:
        problems.append(f"session is in phase {session.phase.value!r}, not complete")
    covered = set(session.event_labels)
    expected = set(range(session.n_sentences))
    if covered != expected:
        problems.append(f"event labels missing for sentences {sorted(expected - covered)}")
    needed = {
        i
        for i, lb in session.event_labels.items()
        if lb is not EventType.IRRELEVANT
    }
    have = set(session.info_labels)
    if have != needed:
        extra, missing = sorted(have - needed), sorted(needed - have)
        if missing:
            problems.append(f"information labels missing for sentences {missing}")
        if extra:
            problems.append(f"information labels present on irrelevant sentences {extra}")
    for i in sorted(covered & expected):
        result = validate_pair(
            session.event_labels[i], session.info_labels.get(i), "strict"
        )
        if not result.ok:
            codes = ",".join(d.code for d in result.diagnostics if d.severity == "error")
            problems.append(f"sentence {i} fails validation ({codes})")
    return problems
