"""Inter-annotator agreement between two annotators, per level.

Percent agreement, Cohen's kappa and the confusion matrix are computed
over the sentences both annotators labelled.  At the information level
the default mode drops sentences where either annotator chose
irrelevant (there is no information label to compare); the inclusive
mode instead adds a synthetic "absent" category so disagreement about
irrelevance itself shows up in the numbers.  Reports carry both modes
side by side and are descriptive only; no threshold is applied.

Degenerate kappa (chance agreement of exactly 1 with imperfect observed
agreement) is reported as undefined (None), never as a number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Optional, Sequence

import numpy as np

from .schema import EventType, InformationType
from .store import AnnotationRecord

ABSENT = "absent"

EVENT_LABELS = tuple(e.value for e in EventType)
INFO_LABELS = tuple(i.value for i in InformationType)

Labeling = Mapping[Hashable, str]


@dataclass(frozen=True)
class AgreementReport:
    level: str  # "event" | "info"
    mode: Optional[str]  # None for event level, "exclude" | "inclusive" for info
    labels: tuple[str, ...]
    n_items: int
    percent_agreement: Optional[float]
    kappa: Optional[float]
    confusion: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "mode": self.mode,
            "labels": list(self.labels),
            "n_items": self.n_items,
            "percent_agreement": self.percent_agreement,
            "kappa": self.kappa,
            "confusion": [list(row) for row in self.confusion],
        }


def _shared_keys(a: Labeling, b: Labeling) -> list[Hashable]:
    return sorted(set(a) & set(b), key=repr)


def confusion_matrix(a: Labeling, b: Labeling, labels: Sequence[str]) -> np.ndarray:
    """Cell (x, y) counts items labelled x by a and y by b."""
    index = {label: i for i, label in enumerate(labels)}
    matrix = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for key in _shared_keys(a, b):
        matrix[index[a[key]], index[b[key]]] += 1
    return matrix


def percent_agreement(a: Labeling, b: Labeling) -> Optional[float]:
    """Fraction of co-annotated items with identical labels.

    None (undefined) when the annotators share no items.
    """
    keys = _shared_keys(a, b)
    if not keys:
        return None
    matches = sum(1 for key in keys if a[key] == b[key])
    return matches / len(keys)


def cohen_kappa(a: Labeling, b: Labeling) -> Optional[float]:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e).

    p_e is the dot product of the two annotators' marginal label
    distributions.  When p_e is exactly 1 the correction collapses:
    perfect observed agreement still yields 1.0, anything else is
    undefined and reported as None.
    """
    keys = _shared_keys(a, b)
    if not keys:
        return None
    labels = sorted({a[k] for k in keys} | {b[k] for k in keys})
    matrix = confusion_matrix(a, b, labels)
    n = matrix.sum()
    p_o = float(np.trace(matrix)) / n
    marginal_a = matrix.sum(axis=1) / n
    marginal_b = matrix.sum(axis=0) / n
    p_e = float(marginal_a @ marginal_b)
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else None
    return (p_o - p_e) / (1.0 - p_e)


def event_labelings(
    records_a: Sequence[AnnotationRecord], records_b: Sequence[AnnotationRecord]
) -> tuple[dict, dict]:
    a = {(r.annotation.doc_id, r.annotation.sentence_index): r.annotation.event_type.value
         for r in records_a}
    b = {(r.annotation.doc_id, r.annotation.sentence_index): r.annotation.event_type.value
         for r in records_b}
    return a, b


def info_labelings(
    records_a: Sequence[AnnotationRecord],
    records_b: Sequence[AnnotationRecord],
    mode: str = "exclude",
) -> tuple[dict, dict]:
    """Information-level labelings restricted per mode.

    exclude: keep only sentences where both sides carry an information
    label.  inclusive: map a missing label (irrelevant or unfinished) to
    the synthetic "absent" category on both sides.
    """
    if mode not in ("exclude", "inclusive"):
        raise ValueError(f"unknown info agreement mode {mode!r}")

    def extract(records: Sequence[AnnotationRecord]) -> dict:
        out = {}
        for record in records:
            ann = record.annotation
            key = (ann.doc_id, ann.sentence_index)
            if ann.information_type is not None:
                out[key] = ann.information_type.value
            elif mode == "inclusive":
                out[key] = ABSENT
        return out

    return extract(records_a), extract(records_b)


def agreement_report(
    records_a: Sequence[AnnotationRecord],
    records_b: Sequence[AnnotationRecord],
    level: str,
    mode: str = "exclude",
) -> AgreementReport:
    """Build the full per-level report from two latest-revision record sets."""
    if level == "event":
        a, b = event_labelings(records_a, records_b)
        labels: tuple[str, ...] = EVENT_LABELS
        report_mode = None
    elif level == "info":
        a, b = info_labelings(records_a, records_b, mode)
        labels = INFO_LABELS + (ABSENT,) if mode == "inclusive" else INFO_LABELS
        report_mode = mode
    else:
        raise ValueError(f"unknown agreement level {level!r} (use event or info)")

    matrix = confusion_matrix(a, b, labels)
    n_items = int(matrix.sum())
    return AgreementReport(
        level=level,
        mode=report_mode,
        labels=labels,
        n_items=n_items,
        percent_agreement=percent_agreement(a, b),
        kappa=cohen_kappa(a, b),
        confusion=tuple(tuple(int(x) for x in row) for row in matrix),
    )
