"""Exception types shared across the package.

Every error carries a stable ``code`` (its class name) so the HTTP layer
can map library failures onto wire-level ApiError payloads without
string matching.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .schema import ValidationResult


class AnnotationError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# corpus
class MissingField(AnnotationError):
    def __init__(self, field: str):
        super().__init__(f"required field missing or not a string: {field!r}")
        self.field = field


class InvalidDate(AnnotationError):
    pass


class EmptyBody(AnnotationError):
    pass


# schema / resolver
class EmptyCandidates(AnnotationError):
    pass


class IllegalCandidate(AnnotationError):
    pass


class SchemaViolation(AnnotationError):
    """A label combination the validation rules reject.

    Carries the full ValidationResult so callers (and the API) can show
    every diagnostic, not just the first.
    """

    def __init__(self, result: "ValidationResult"):
        codes = ", ".join(d.code for d in result.diagnostics)
        super().__init__(f"annotation fails validation ({codes})")
        self.result = result


# workflow
class WrongPhase(AnnotationError):
    pass


class IndexOutOfRange(AnnotationError):
    pass


class IrrelevantSentence(AnnotationError):
    pass


class EmptySentenceList(AnnotationError):
    pass


class OverrideRequired(AnnotationError):
    """Chosen label disagrees with the resolver and no override was given."""


# store
class StorageFailure(AnnotationError):
    pass


class UnknownFormat(AnnotationError):
    pass


class DocumentNotFound(AnnotationError):
    pass


class SessionNotFound(AnnotationError):
    pass


class UnknownLabel(AnnotationError):
    pass


class StoreLocked(AnnotationError):
    pass
