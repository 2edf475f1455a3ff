"""epiannot: two-level sentence annotation for animal-disease news.

Ingests news documents, segments them into stable sentence spans, walks
annotators through the guided event-type / information-type protocol,
persists everything in an auditable file store, and reports
inter-annotator agreement.
"""

from .corpus import (
    DEFAULT_ABBREVIATIONS,
    Document,
    Sentence,
    ingest_document,
    segment_sentences,
)
from .schema import (
    DEFAULT_POLICY,
    EventType,
    InformationType,
    PrecedencePolicy,
    Resolution,
    SentenceAnnotation,
    ValidationResult,
    label_help,
    resolve_primary_label,
    validate_annotation,
    validate_pair,
    validity_table,
)
from .store import AnnotationRecord, AnnotationStore
from .workflow import (
    Phase,
    SessionState,
    acknowledge_reading,
    amend_event_label,
    create_session,
    set_event_label,
    set_info_label,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ABBREVIATIONS",
    "DEFAULT_POLICY",
    "AnnotationRecord",
    "AnnotationStore",
    "Document",
    "EventType",
    "InformationType",
    "Phase",
    "PrecedencePolicy",
    "Resolution",
    "Sentence",
    "SentenceAnnotation",
    "SessionState",
    "ValidationResult",
    "acknowledge_reading",
    "amend_event_label",
    "create_session",
    "ingest_document",
    "label_help",
    "resolve_primary_label",
    "segment_sentences",
    "set_event_label",
    "set_info_label",
    "validate_annotation",
    "validate_pair",
    "validity_table",
]
