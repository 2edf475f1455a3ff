"""Shipped fixture corpus: the worked example sentences from the
annotation guidelines, with their gold two-level labels.

Ships with the package so the acceptance suite (and new deployments)
can exercise the full ingest -> segment -> annotate -> export pipeline
against known-good content.
"""

from __future__ import annotations

import json
from importlib import resources


def _read_jsonl(name: str) -> list[dict]:
    text = resources.files(__package__).joinpath(name).read_text(encoding="utf-8")
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def load_fixture_documents() -> list[dict]:
    """Raw document records in the line-delimited ingestion format."""
    return _read_jsonl("guideline_documents.jsonl")


def load_fixture_gold() -> list[dict]:
    """Gold labels per (doc_id, sentence_index), with expected text."""
    return _read_jsonl("guideline_gold.jsonl")


def fixture_documents_path() -> str:
    """Filesystem path of the shipped document file (for CLI tests)."""
    return str(resources.files(__package__).joinpath("guideline_documents.jsonl"))
