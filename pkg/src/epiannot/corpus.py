"""Document ingestion and deterministic sentence segmentation.

Documents arrive as line-delimited JSON records.  Bodies are normalized
only by removing carriage returns: anything more aggressive would shift
character offsets against the original article, and the sentence spans
produced here are the stable coordinates every annotation refers to.

Segmentation is rule-based on purpose.  A statistical splitter would
give marginally better boundaries but non-reproducible ones, and
annotation indexes must survive re-ingestion byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping, Optional

from .errors import EmptyBody, InvalidDate, MissingField

# Trailing tokens that end with a period but do not end a sentence.
# Spaced two-letter forms ("e. g.") occur verbatim in news text, so both
# shapes are covered.  Matching is exact (case-sensitive): lowering would
# make a sentence-final "No." swallow the next sentence.
DEFAULT_ABBREVIATIONS = frozenset(
    {
        "e.g.",
        "i.e.",
        "etc.",
        "Dr.",
        "Mr.",
        "Ms.",
        "No.",
        "vs.",
        "e. g.",
        "i. e.",
    }
)

_TERMINALS = ".!?"
_QUOTES = "\"'“‘«"
_OPENERS = "([{\"'“‘«"


@dataclass(frozen=True)
class Document:
    """A news article with metadata and a normalized body."""

    id: str
    title: str
    source: str
    publication_date: date
    body: str
    url: Optional[str] = None

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "source": self.source,
            "url": self.url,
            "publication_date": self.publication_date.isoformat(),
            "body": self.body,
        }


@dataclass(frozen=True)
class Sentence:
    """One annotation unit: a character span of the normalized body."""

    doc_id: str
    index: int
    char_start: int
    char_end: int
    text: str

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "index": self.index,
            "char_start": self.char_start,
            "char_end": self.char_end,
            "text": self.text,
        }


def normalize_body(raw: str) -> str:
    """Unify line endings to LF; leave every other character alone."""
    return raw.replace("\r\n", "\n").replace("\r", "\n")


def derive_doc_id(title: str, publication_date: date, body: str) -> str:
    """Stable content hash so re-ingesting an unchanged corpus never
    changes identifiers."""
    digest = hashlib.sha256(
        "\x1f".join([title, publication_date.isoformat(), body]).encode("utf-8")
    )
    return digest.hexdigest()[:16]


def ingest_document(raw: Mapping) -> Document:
    """Build a Document from one raw record.

    Raises MissingField / InvalidDate / EmptyBody; never returns a
    partially valid document.
    """
    for field_name in ("title", "source", "publication_date", "body"):
        value = raw.get(field_name)
        if not isinstance(value, str):
            raise MissingField(field_name)

    try:
        publication_date = date.fromisoformat(raw["publication_date"])
    except ValueError as exc:
        raise InvalidDate(
            f"publication_date {raw['publication_date']!r} is not a valid "
            "YYYY-MM-DD calendar date"
        ) from exc

    body = normalize_body(raw["body"])
    if not body.strip():
        raise EmptyBody("document body is empty after whitespace normalization")

    url = raw.get("url")
    if url is not None and not isinstance(url, str):
        raise MissingField("url")

    doc_id = raw.get("id")
    if doc_id is not None and (not isinstance(doc_id, str) or not doc_id):
        raise MissingField("id")
    if doc_id is None:
        doc_id = derive_doc_id(raw["title"], publication_date, body)

    return Document(
        id=doc_id,
        title=raw["title"],
        source=raw["source"],
        publication_date=publication_date,
        body=body,
        url=url,
    )


def _trailing_token(text: str, end: int) -> str:
    """The whitespace-delimited token ending at ``end`` (exclusive),
    stripped of opening brackets/quotes."""
    start = end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start:end].lstrip(_OPENERS)


def _is_abbreviation(text: str, punct_end: int, abbreviations: frozenset[str]) -> bool:
    token = _trailing_token(text, punct_end)
    if token in abbreviations:
        return True
    # Spaced forms span two tokens ("e." + "g."): join with the single
    # space the guideline examples use.
    token_start = punct_end - len(token)
    if token_start >= 1 and text[token_start - 1] == " ":
        prev = _trailing_token(text, token_start - 1)
        if prev and f"{prev} {token}" in abbreviations:
            return True
    return False


def _boundaries(body: str, abbreviations: frozenset[str]) -> list[int]:
    """Positions where one sentence ends (exclusive) and a gap begins."""
    cuts: list[int] = []
    i = 0
    n = len(body)
    while i < n:
        if body[i] not in _TERMINALS:
            i += 1
            continue
        j = i
        while j < n and body[j] in _TERMINALS:
            j += 1
        k = j
        while k < n and body[k].isspace():
            k += 1
        if (
            k > j  # at least one whitespace after the punctuation run
            and k < n
            and (body[k].isupper() or body[k].isdigit() or body[k] in _QUOTES)
            and not _is_abbreviation(body, j, abbreviations)
        ):
            cuts.append(j)
        i = j
    return cuts


def segment_sentences(
    doc: Document, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> list[Sentence]:
    """Split a document body into ordered, non-overlapping sentence spans.

    A split happens after a run of terminal punctuation (. ! ?) that is
    followed by whitespace and an uppercase letter, digit, or quote,
    unless the token before the punctuation is a known abbreviation.
    Everything between spans is whitespace, so spans plus gaps always
    reconstruct the body exactly.  A body without terminal punctuation
    yields a single sentence.
    """
    body = doc.body
    cuts = _boundaries(body, abbreviations)
    sentences: list[Sentence] = []
    chunk_start = 0
    for cut in cuts + [len(body)]:
        start, end = chunk_start, cut
        while start < end and body[start].isspace():
            start += 1
        while end > start and body[end - 1].isspace():
            end -= 1
        if end > start:
            sentences.append(
                Sentence(
                    doc_id=doc.id,
                    index=len(sentences),
                    char_start=start,
                    char_end=end,
                    text=body[start:end],
                )
            )
        chunk_start = cut
    return sentences


def read_documents(lines: Iterable[str]) -> Iterable[tuple[int, Document | Exception]]:
    """Parse line-delimited document records, yielding (line_number, result).

    Failures are yielded in place of documents so callers can keep going
    past bad lines and report them with their line numbers.
    """
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            if not isinstance(raw, dict):
                raise ValueError("record must be a JSON object")
            yield line_number, ingest_document(raw)
        except Exception as exc:  # noqa: BLE001 - reported per line
            yield line_number, exc
