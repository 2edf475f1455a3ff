from __future__ import annotations

import json
from datetime import datetime, timezone

import pytest
from click.testing import CliRunner
from filelock import FileLock

from epiannot.cli import main
from epiannot.schema import EventType as ET, InformationType as IT, SentenceAnnotation
from epiannot.store import AnnotationRecord, AnnotationStore, record_to_wire

TS = datetime(2022, 2, 2, tzinfo=timezone.utc)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def docs_file(tmp_path):
    path = tmp_path / "docs.jsonl"
    records = [
        {
            "id": "d1",
            "title": "ASF in Korea",
            "source": "wire",
            "publication_date": "2019-09-09",
            "body": "South Korea confirms two new African swine fever cases. All pigs will be culled.",
        },
        {
            "id": "d2",
            "title": "Bluetongue primer",
            "source": "wire",
            "publication_date": "2018-05-02",
            "body": "Bluetongue is a viral disease of ruminants (e. g. cattle, sheep goats, deer).",
        },
    ]
    path.write_text(
        "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records),
        encoding="utf-8",
    )
    return path


def annotation_line(
    doc_id="d1",
    index=0,
    annotator="alice",
    event="current_event",
    info="descriptive_epidemiology",
    revision=1,
):
    return json.dumps(
        {
            "doc_id": doc_id,
            "sentence_index": index,
            "annotator": annotator,
            "event_type": event,
            "information_type": info,
            "candidates": None,
            "override": False,
            "timestamp": "2022-02-02T00:00:00+00:00",
            "revision": revision,
        }
    )


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------


def test_ingest_reports_documents_and_sentences(runner, docs_file, tmp_path):
    store_root = tmp_path / "store"
    result = runner.invoke(main, ["ingest", str(docs_file), "--store", str(store_root)])
    assert result.exit_code == 0, result.output
    assert "2 documents, 3 sentences" in result.output

    store = AnnotationStore(store_root)
    assert [d.id for d in store.list_documents()] == ["d1", "d2"]
    assert len(store.get_sentences("d1")) == 2
    assert len(store.get_sentences("d2")) == 1  # "e. g." never splits


def test_reingest_is_idempotent_by_id(runner, docs_file, tmp_path):
    store_root = str(tmp_path / "store")
    assert runner.invoke(main, ["ingest", str(docs_file), "--store", store_root]).exit_code == 0
    result = runner.invoke(main, ["ingest", str(docs_file), "--store", store_root])
    assert result.exit_code == 0
    assert "0 documents, 0 sentences" in result.output
    assert "2 documents already present, skipped" in result.output


def test_ingest_continues_past_bad_lines(runner, tmp_path):
    path = tmp_path / "docs.jsonl"
    good = {
        "title": "ok",
        "source": "wire",
        "publication_date": "2019-01-01",
        "body": "A sentence.",
    }
    bad = dict(good, publication_date="09/31/2019")
    path.write_text(
        json.dumps(good) + "\n" + json.dumps(bad) + "\n", encoding="utf-8"
    )
    result = runner.invoke(main, ["ingest", str(path), "--store", str(tmp_path / "s")])
    assert result.exit_code == 1
    assert "1 documents, 1 sentences" in result.output
    assert "line 2" in result.output
    assert "1 failed lines" in result.output


def test_ingest_respects_annot_store_env(runner, docs_file, tmp_path, monkeypatch):
    env_root = tmp_path / "env-store"
    monkeypatch.setenv("ANNOT_STORE", str(env_root))
    result = runner.invoke(
        main, ["ingest", str(docs_file), "--store", str(tmp_path / "flag-store")]
    )
    assert result.exit_code == 0
    assert env_root.exists()
    assert not (tmp_path / "flag-store").exists()


def test_ingest_fails_when_store_is_locked(runner, docs_file, tmp_path):
    store_root = tmp_path / "store"
    store = AnnotationStore(store_root)
    with FileLock(str(store.lock_path)):
        result = runner.invoke(main, ["ingest", str(docs_file), "--store", str(store_root)])
    assert result.exit_code != 0
    assert "locked" in result.output


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def test_validate_clean_file_exits_zero(runner, tmp_path):
    path = tmp_path / "ann.jsonl"
    path.write_text(annotation_line() + "\n", encoding="utf-8")
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 0
    assert result.output.strip() == ""


def test_validate_reports_e2_and_exits_nonzero(runner, tmp_path):
    path = tmp_path / "ann.jsonl"
    path.write_text(
        annotation_line(event="current_event", info="general_epidemiology") + "\n",
        encoding="utf-8",
    )
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 1
    assert "E2" in result.output
    assert "d1\t0\talice" in result.output


def test_validate_warnings_only_exits_zero(runner, tmp_path):
    path = tmp_path / "ann.jsonl"
    path.write_text(
        annotation_line(event="general", info="distribution") + "\n", encoding="utf-8"
    )
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 0
    assert "W1" in result.output


def test_validate_reports_parse_failures(runner, tmp_path):
    path = tmp_path / "ann.jsonl"
    path.write_text("not json\n" + annotation_line() + "\n", encoding="utf-8")
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 1
    assert "parse failure" in result.output


# ---------------------------------------------------------------------------
# agree
# ---------------------------------------------------------------------------


def test_agree_event_level(runner, tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    seq_a = ["current_event", "current_event", "current_event", "old_event"]
    seq_b = ["current_event", "current_event", "old_event", "old_event"]
    a.write_text(
        "".join(annotation_line(index=i, event=e, info=None) + "\n" for i, e in enumerate(seq_a)),
        encoding="utf-8",
    )
    b.write_text(
        "".join(
            annotation_line(index=i, annotator="bob", event=e, info=None) + "\n"
            for i, e in enumerate(seq_b)
        ),
        encoding="utf-8",
    )
    result = runner.invoke(main, ["agree", "--a", str(a), "--b", str(b), "--level", "event"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["n_items"] == 4
    assert report["percent_agreement"] == 0.75
    assert report["kappa"] == 0.5


def test_agree_info_level_reports_both_modes(runner, tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    a.write_text(
        annotation_line(index=0) + "\n" + annotation_line(index=1, event="irrelevant", info=None) + "\n",
        encoding="utf-8",
    )
    b.write_text(
        annotation_line(index=0, annotator="bob") + "\n"
        + annotation_line(index=1, annotator="bob", info="distribution") + "\n",
        encoding="utf-8",
    )
    result = runner.invoke(main, ["agree", "--a", str(a), "--b", str(b), "--level", "info"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert set(payload["modes"]) == {"exclude", "inclusive"}
    assert payload["modes"]["exclude"]["n_items"] == 1
    assert payload["modes"]["inclusive"]["n_items"] == 2


def test_agree_uses_latest_revision_per_sentence(runner, tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    a.write_text(
        annotation_line(index=0, event="old_event", info=None, revision=1) + "\n"
        + annotation_line(index=0, event="current_event", info=None, revision=2) + "\n",
        encoding="utf-8",
    )
    b.write_text(
        annotation_line(index=0, annotator="bob", event="current_event", info=None) + "\n",
        encoding="utf-8",
    )
    result = runner.invoke(main, ["agree", "--a", str(a), "--b", str(b), "--level", "event"])
    report = json.loads(result.output)
    assert report["percent_agreement"] == 1.0


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def _seed_store(root) -> AnnotationStore:
    store = AnnotationStore(root)
    store.put_annotation(
        AnnotationRecord(
            annotation=SentenceAnnotation(
                doc_id="d1",
                sentence_index=0,
                annotator_id="alice",
                event_type=ET.CURRENT_EVENT,
                information_type=IT.DESCRIPTIVE_EPIDEMIOLOGY,
                timestamp=TS,
            )
        )
    )
    return store


def test_export_jsonl(runner, tmp_path):
    store = _seed_store(tmp_path / "store")
    out = tmp_path / "out.jsonl"
    result = runner.invoke(
        main,
        ["export", "--format", "jsonl", "--out", str(out), "--store", str(store.root)],
    )
    assert result.exit_code == 0, result.output
    assert out.read_bytes() == store.export_corpus("jsonl")


def test_export_tsv(runner, tmp_path, make_doc):
    from epiannot.corpus import segment_sentences

    store = AnnotationStore(tmp_path / "store")
    doc = make_doc("Cases rose fast.", doc_id="d1")
    store.add_document(doc, segment_sentences(doc))
    store.put_annotation(
        AnnotationRecord(
            annotation=SentenceAnnotation(
                doc_id="d1",
                sentence_index=0,
                annotator_id="alice",
                event_type=ET.CURRENT_EVENT,
                information_type=IT.DISTRIBUTION,
                timestamp=TS,
            )
        )
    )
    out = tmp_path / "out.tsv"
    result = runner.invoke(
        main,
        ["export", "--format", "tsv", "--out", str(out), "--store", str(store.root)],
    )
    assert result.exit_code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("doc_id\t")
    assert lines[1].endswith("Cases rose fast.")


# ---------------------------------------------------------------------------
# stats / progress
# ---------------------------------------------------------------------------


def test_stats_command(runner, tmp_path):
    store = _seed_store(tmp_path / "store")
    result = runner.invoke(main, ["stats", "--store", str(store.root)])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["n_records"] == 1
    assert payload["annotators"] == {"alice": 1}


def test_progress_command(runner, tmp_path, make_doc):
    from epiannot.corpus import segment_sentences
    from epiannot.workflow import create_session

    store = AnnotationStore(tmp_path / "store")
    doc = make_doc("Cases rose fast.", doc_id="d1")
    sentences = segment_sentences(doc)
    store.add_document(doc, sentences)
    store.save_session("s1", create_session(doc, sentences, "alice"))
    result = runner.invoke(main, ["progress", "--store", str(store.root)])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["alice"]["sessions"] == 1
