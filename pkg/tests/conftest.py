from __future__ import annotations

import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from epiannot.corpus import Document, segment_sentences


@pytest.fixture(autouse=True)
def _isolate_store_env(monkeypatch):
    monkeypatch.delenv("ANNOT_STORE", raising=False)


@pytest.fixture
def make_doc():
    def _make(body: str, doc_id: str = "doc-1", pub: str = "2019-09-09") -> Document:
        return Document(
            id=doc_id,
            title="test article",
            source="test wire",
            publication_date=date.fromisoformat(pub),
            body=body,
        )

    return _make


@pytest.fixture
def doc_with_sentences(make_doc):
    def _make(body: str, doc_id: str = "doc-1", pub: str = "2019-09-09"):
        doc = make_doc(body, doc_id=doc_id, pub=pub)
        return doc, segment_sentences(doc)

    return _make
