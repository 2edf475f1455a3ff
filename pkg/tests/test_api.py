from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from epiannot.api import create_app
from epiannot.corpus import ingest_document, segment_sentences
from epiannot.schema import (
    EventType as ET,
    InformationType as IT,
    label_help,
    resolve_primary_label,
)
from epiannot.store import AnnotationStore

DOC = {
    "id": "d1",
    "title": "ASF in Korea",
    "source": "wire",
    "url": None,
    "publication_date": "2019-09-09",
    "body": (
        "South Korea confirms two new African swine fever cases. "
        "All pigs will be culled. "
        "Comments will be moderated."
    ),
}


@pytest.fixture
def client(tmp_path):
    root = tmp_path / "store"
    store = AnnotationStore(root)
    doc = ingest_document(DOC)
    store.add_document(doc, segment_sentences(doc))
    app = create_app(str(root))
    with TestClient(app) as test_client:
        test_client.store = app.state.store
        yield test_client


def start_session(client, annotator="alice") -> str:
    response = client.post("/api/sessions", json={"doc_id": "d1", "annotator": annotator})
    assert response.status_code == 200, response.text
    session_id = response.json()["id"]
    for _ in range(2):
        assert client.post(f"/api/sessions/{session_id}/ack-reading").status_code == 200
    return session_id


def label_all_events(client, session_id, labels=("current_event", "current_event", "irrelevant")):
    for index, label in enumerate(labels):
        response = client.put(
            f"/api/sessions/{session_id}/event-label",
            json={"sentence_index": index, "label": label},
        )
        assert response.status_code == 200, response.text
    return response.json()


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------


def test_empty_store_lists_no_documents(tmp_path):
    app = create_app(str(tmp_path / "empty"))
    with TestClient(app) as client:
        response = client.get("/api/documents")
        assert response.status_code == 200
        assert response.json() == []


def test_document_listing_matches_store(client):
    listed = client.get("/api/documents").json()
    direct = client.store.list_documents()
    assert [d["id"] for d in listed] == [d.id for d in direct]
    assert listed[0]["publication_date"] == "2019-09-09"
    assert "body" not in listed[0]


def test_document_detail_and_sentences_match_store(client):
    assert client.get("/api/documents/d1").json() == client.store.get_document("d1").to_record()
    api_sentences = client.get("/api/documents/d1/sentences").json()
    assert api_sentences == [s.to_record() for s in client.store.get_sentences("d1")]


def test_unknown_document_is_404_with_api_error(client):
    response = client.get("/api/documents/ghost")
    assert response.status_code == 404
    payload = response.json()
    assert payload["code"] == "DocumentNotFound"
    assert "ghost" in payload["message"]


# ---------------------------------------------------------------------------
# Session protocol over HTTP
# ---------------------------------------------------------------------------


def test_session_lifecycle(client):
    response = client.post("/api/sessions", json={"doc_id": "d1", "annotator": "alice"})
    body = response.json()
    assert body["phase"] == "metadata_read"
    assert body["reference_date"] == "2019-09-09"
    session_id = body["id"]

    assert client.post(f"/api/sessions/{session_id}/ack-reading").json()["phase"] == "article_read"
    assert client.post(f"/api/sessions/{session_id}/ack-reading").json()["phase"] == "event_pass"

    final = label_all_events(client, session_id)
    assert final["phase"] == "info_pass"
    assert final["revision"] >= 1

    response = client.put(
        f"/api/sessions/{session_id}/info-label",
        json={"sentence_index": 0, "label": "descriptive_epidemiology"},
    )
    assert response.status_code == 200
    response = client.put(
        f"/api/sessions/{session_id}/info-label",
        json={"sentence_index": 1, "label": "preventive_control_measures"},
    )
    assert response.json()["phase"] == "complete"


def test_sessions_survive_restart(client, tmp_path):
    session_id = start_session(client)
    # a brand-new app over the same store sees the same session
    app2 = create_app(str(client.store.root))
    with TestClient(app2) as second:
        response = second.get(f"/api/sessions/{session_id}")
        assert response.status_code == 200
        assert response.json()["phase"] == "event_pass"


def test_event_label_before_acknowledgment_is_409(client):
    response = client.post("/api/sessions", json={"doc_id": "d1", "annotator": "alice"})
    session_id = response.json()["id"]
    response = client.put(
        f"/api/sessions/{session_id}/event-label",
        json={"sentence_index": 0, "label": "current_event"},
    )
    assert response.status_code == 409
    assert response.json()["code"] == "WrongPhase"


def test_schema_violation_returns_400_with_embedded_diagnostics(client):
    session_id = start_session(client)
    label_all_events(client, session_id)
    response = client.put(
        f"/api/sessions/{session_id}/info-label",
        json={"sentence_index": 0, "label": "general_epidemiology"},
    )
    assert response.status_code == 400
    payload = response.json()
    assert payload["code"] == "SchemaViolation"
    codes = [d["code"] for d in payload["details"]["diagnostics"]]
    assert codes == ["E2"]


def test_info_label_on_irrelevant_sentence_is_400(client):
    session_id = start_session(client)
    label_all_events(client, session_id)
    response = client.put(
        f"/api/sessions/{session_id}/info-label",
        json={"sentence_index": 2, "label": "distribution"},
    )
    assert response.status_code == 400
    assert response.json()["code"] == "IrrelevantSentence"


def test_out_of_range_index_is_400(client):
    session_id = start_session(client)
    response = client.put(
        f"/api/sessions/{session_id}/event-label",
        json={"sentence_index": 99, "label": "current_event"},
    )
    assert response.status_code == 400
    assert response.json()["code"] == "IndexOutOfRange"


def test_unknown_session_is_404(client):
    response = client.post("/api/sessions/doesnotexist/ack-reading")
    assert response.status_code == 404
    assert response.json()["code"] == "SessionNotFound"


def test_override_flow_is_recorded_in_the_export(client):
    session_id = start_session(client)
    label_all_events(client, session_id)
    body = {
        "sentence_index": 0,
        "label": "preventive_control_measures",
        "candidates": ["descriptive_epidemiology", "preventive_control_measures"],
    }
    response = client.put(f"/api/sessions/{session_id}/info-label", json=body)
    assert response.status_code == 400
    assert response.json()["code"] == "OverrideRequired"

    response = client.put(
        f"/api/sessions/{session_id}/info-label", json=body | {"override": True}
    )
    assert response.status_code == 200

    exported = client.store.export_corpus("jsonl").decode("utf-8").splitlines()
    record = next(
        json.loads(line)
        for line in exported
        if json.loads(line)["sentence_index"] == 0
        and json.loads(line)["information_type"] is not None
    )
    assert record["override"] is True
    assert record["candidates"] == [
        "descriptive_epidemiology",
        "preventive_control_measures",
    ]


def test_labels_are_persisted_with_increasing_revisions(client):
    session_id = start_session(client)
    first = client.put(
        f"/api/sessions/{session_id}/event-label",
        json={"sentence_index": 0, "label": "current_event"},
    ).json()["revision"]
    second = client.put(
        f"/api/sessions/{session_id}/event-label",
        json={"sentence_index": 0, "label": "old_event"},
    ).json()["revision"]
    assert (first, second) == (1, 2)
    history = client.store.history("d1", 0, "alice")
    assert [r.annotation.event_type for r in history] == [ET.CURRENT_EVENT, ET.OLD_EVENT]


def test_unknown_label_is_404(client):
    session_id = start_session(client)
    response = client.put(
        f"/api/sessions/{session_id}/event-label",
        json={"sentence_index": 0, "label": "not_a_label"},
    )
    assert response.status_code == 404
    assert response.json()["code"] == "UnknownLabel"


def test_malformed_request_body_is_400(client):
    session_id = start_session(client)
    response = client.put(
        f"/api/sessions/{session_id}/event-label", json={"label": "current_event"}
    )
    assert response.status_code == 400
    assert response.json()["code"] == "InvalidRequest"


# ---------------------------------------------------------------------------
# Resolver, help, agreement, progress
# ---------------------------------------------------------------------------


def test_resolve_endpoint_matches_library_on_table1_rows(client):
    cases = [
        (["descriptive_epidemiology", "preventive_control_measures"], "descriptive_epidemiology"),
        (["preventive_control_measures", "economic_political_consequences"], "preventive_control_measures"),
        (["descriptive_epidemiology", "transmission_pathway"], "transmission_pathway"),
    ]
    for candidates, expected in cases:
        response = client.post("/api/resolve", json={"candidates": candidates})
        assert response.status_code == 200
        payload = response.json()
        assert payload["main"] == expected
        direct = resolve_primary_label(frozenset(IT(c) for c in candidates))
        assert payload == direct.to_dict()


def test_resolve_rejects_general_epidemiology(client):
    response = client.post(
        "/api/resolve",
        json={"candidates": ["general_epidemiology", "distribution"]},
    )
    assert response.status_code == 400
    assert response.json()["code"] == "IllegalCandidate"


def test_resolve_rejects_empty_candidates(client):
    response = client.post("/api/resolve", json={"candidates": []})
    assert response.status_code == 400
    assert response.json()["code"] == "EmptyCandidates"


def test_help_endpoint_equals_library(client):
    for wire in ["current_event", "general_epidemiology"]:
        payload = client.get(f"/api/help/{wire}").json()
        assert payload == {"label": wire, "help": label_help(wire)}
    assert client.get("/api/help/nope").status_code == 404


def test_agreement_endpoint_event_level(client):
    for annotator, labels in [
        ("alice", ("current_event", "current_event", "irrelevant")),
        ("bob", ("current_event", "old_event", "irrelevant")),
    ]:
        session_id = start_session(client, annotator)
        label_all_events(client, session_id, labels)
    response = client.get("/api/agreement", params={"a": "alice", "b": "bob", "level": "event"})
    assert response.status_code == 200
    payload = response.json()
    assert payload["n_items"] == 3
    assert payload["percent_agreement"] == pytest.approx(2 / 3)


def test_agreement_endpoint_info_level_has_both_modes(client):
    session_id = start_session(client, "alice")
    label_all_events(client, session_id)
    response = client.get("/api/agreement", params={"a": "alice", "b": "alice", "level": "info"})
    payload = response.json()
    assert set(payload["modes"]) == {"exclude", "inclusive"}


def test_progress_endpoint(client):
    session_id = start_session(client, "carol")
    label_all_events(client, session_id)
    payload = client.get("/api/progress", params={"annotator": "carol"}).json()
    assert payload["annotator"] == "carol"
    assert payload["documents_total"] == 1
    (session,) = payload["sessions"]
    assert session["session_id"] == session_id
    assert session["phase"] == "info_pass"
    assert session["event_labeled"] == 3
