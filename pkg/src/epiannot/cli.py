"""Command-line interface: batch ingestion, linting, agreement, export,
and the API service.

The store directory comes from --store, but the ANNOT_STORE environment
variable overrides it when set, so deployments can pin one store for
every invocation.  Commands that write (ingest, serve) take the store's
lockfile first; a held lock means the service owns the store and batch
writes must wait until it stops.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
from filelock import FileLock, Timeout

from . import agreement as agreement_mod
from .corpus import read_documents, segment_sentences
from .schema import validate_annotation
from .store import AnnotationStore, record_from_wire
from .workflow import Phase


def _store_root(option_value: str) -> str:
    return os.environ.get("ANNOT_STORE") or option_value


def _locked_store(root: str) -> tuple[AnnotationStore, FileLock]:
    store = AnnotationStore(root)
    lock = FileLock(str(store.lock_path))
    try:
        lock.acquire(timeout=0)
    except Timeout:
        raise click.ClickException(
            f"store {root!r} is locked by another writer (is the service running?)"
        ) from None
    return store, lock


store_option = click.option(
    "--store",
    "store_root",
    default="annot_store",
    show_default=True,
    help="Store directory (ANNOT_STORE overrides).",
)


@click.group()
def main():
    """Sentence-level annotation tooling for animal-disease news."""


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@store_option
def ingest(path: str, store_root: str):
    """Ingest line-delimited document records into the store."""
    store, lock = _locked_store(_store_root(store_root))
    added = 0
    skipped = 0
    sentence_total = 0
    failures: list[tuple[int, str]] = []
    try:
        with open(path, encoding="utf-8") as handle:
            for line_number, result in read_documents(handle):
                if isinstance(result, Exception):
                    failures.append((line_number, str(result)))
                    continue
                sentences = segment_sentences(result)
                if store.add_document(result, sentences):
                    added += 1
                    sentence_total += len(sentences)
                else:
                    skipped += 1
    finally:
        lock.release()

    click.echo(f"{added} documents, {sentence_total} sentences")
    if skipped:
        click.echo(f"{skipped} documents already present, skipped")
    for line_number, message in failures:
        click.echo(f"line {line_number}: {message}", err=True)
    if failures:
        click.echo(f"{len(failures)} failed lines", err=True)
        sys.exit(1)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def validate(path: str):
    """Lint an annotation jsonl file against the label rules."""
    error_count = 0
    parse_failures = 0
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = record_from_wire(json.loads(line))
            except Exception as exc:  # noqa: BLE001 - reported per line
                click.echo(f"line {line_number}: parse failure: {exc}", err=True)
                parse_failures += 1
                continue
            result = validate_annotation(record.annotation, "strict")
            ann = record.annotation
            for diag in result.diagnostics:
                click.echo(
                    f"{ann.doc_id}\t{ann.sentence_index}\t{ann.annotator_id}\t"
                    f"{diag.code}\t{diag.severity}\t{diag.message}"
                )
                if diag.severity == "error":
                    error_count += 1
    if error_count or parse_failures:
        sys.exit(1)


@main.command()
@click.option("--a", "path_a", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--b", "path_b", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--level", type=click.Choice(["event", "info"]), default="event")
def agree(path_a: str, path_b: str, level: str):
    """Inter-annotator agreement between two annotation jsonl files."""

    def load_latest(path: str):
        latest: dict = {}
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                if not line.strip():
                    continue
                record = record_from_wire(json.loads(line))
                key = (record.annotation.doc_id, record.annotation.sentence_index)
                current = latest.get(key)
                if current is None or record.annotation.revision > current.annotation.revision:
                    latest[key] = record
        return list(latest.values())

    records_a = load_latest(path_a)
    records_b = load_latest(path_b)
    if level == "event":
        report = agreement_mod.agreement_report(records_a, records_b, "event")
        click.echo(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
    else:
        payload = {
            "level": "info",
            "modes": {
                mode: agreement_mod.agreement_report(
                    records_a, records_b, "info", mode
                ).to_dict()
                for mode in ("exclude", "inclusive")
            },
        }
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))


@main.command()
@click.option("--format", "format_", type=click.Choice(["jsonl", "tsv"]), default="jsonl")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--annotator", default=None, help="Restrict to one annotator.")
@click.option("--doc", "doc_id", default=None, help="Restrict to one document.")
@store_option
def export(format_: str, out_path: str, annotator: str, doc_id: str, store_root: str):
    """Export the latest annotation state to a file."""
    store = AnnotationStore(_store_root(store_root))
    data = store.export_corpus(format=format_, annotator=annotator, doc_id=doc_id)
    Path(out_path).write_bytes(data)
    click.echo(f"wrote {len(data)} bytes to {out_path}")


@main.command()
@click.option("--bind", default="127.0.0.1:8000", show_default=True)
@click.option(
    "--ui",
    "ui_dir",
    default=None,
    type=click.Path(exists=True, file_okay=False),
    help="Also serve a built web console from this directory.",
)
@store_option
def serve(bind: str, ui_dir: str, store_root: str):
    """Run the annotation API service (single writer for the store)."""
    import uvicorn

    from .api import create_app

    root = _store_root(store_root)
    _, lock = _locked_store(root)
    try:
        host, _, port = bind.rpartition(":")
        uvicorn.run(create_app(root, ui_dir), host=host or "127.0.0.1", port=int(port))
    finally:
        lock.release()


@main.command()
@store_option
def stats(store_root: str):
    """Print label distribution and per-annotator throughput."""
    store = AnnotationStore(_store_root(store_root))
    click.echo(json.dumps(store.corpus_stats(), ensure_ascii=False, indent=2))


@main.command()
@store_option
def progress(store_root: str):
    """Summarize session progress per annotator."""
    store = AnnotationStore(_store_root(store_root))
    by_annotator: dict[str, dict[str, int]] = {}
    for state in store.list_sessions().values():
        counts = by_annotator.setdefault(
            state.annotator_id, {"sessions": 0, "complete": 0}
        )
        counts["sessions"] += 1
        if state.phase is Phase.COMPLETE:
            counts["complete"] += 1
    click.echo(json.dumps(by_annotator, ensure_ascii=False, indent=2))


if __name__ == "__main__":
    main()
