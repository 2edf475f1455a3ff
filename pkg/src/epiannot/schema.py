"""Two-level label taxonomy, validity rules, and the multi-topic resolver.

The first level (event type) situates a sentence relative to the
epidemiological context at the article's publication date; the second
level (information type) qualifies what kind of epidemiological
information the sentence carries.  Both levels are closed sets and their
wire names are frozen: they appear verbatim in every export, API payload
and stored record.

Cross-level rules enforced here:

* ``irrelevant`` sentences never carry an information type (E1);
* ``general_epidemiology`` is exclusive to the ``general`` event type
  (E2), and under ``general`` it absorbs the event-description and
  transmission-pathway classes, so those two are illegal there (E3);
* a finished annotation of a non-irrelevant sentence must carry an
  information type (E4, strict mode only);
* the remaining information types under ``general`` are soft-flagged
  (W1) rather than rejected.

Multi-topic sentences are resolved to one main label by two rules:
priority categories win outright, and otherwise a label that is the
consequence of another candidate is discarded (causes beat consequences,
transitively).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Iterable, Literal, Optional, Union

from .errors import EmptyCandidates, IllegalCandidate, UnknownLabel


class EventType(str, Enum):
    """Relation between a sentence and the epidemiological context."""

    CURRENT_EVENT = "current_event"
    OLD_EVENT = "old_event"
    RISK_EVENT = "risk_event"
    GENERAL = "general"
    IRRELEVANT = "irrelevant"


class InformationType(str, Enum):
    """Kind of epidemiological information a sentence carries."""

    DESCRIPTIVE_EPIDEMIOLOGY = "descriptive_epidemiology"
    DISTRIBUTION = "distribution"
    PREVENTIVE_CONTROL_MEASURES = "preventive_control_measures"
    TRANSMISSION_PATHWAY = "transmission_pathway"
    CONCERN_RISK_FACTORS = "concern_risk_factors"
    ECONOMIC_POLITICAL_CONSEQUENCES = "economic_political_consequences"
    GENERAL_EPIDEMIOLOGY = "general_epidemiology"


# Human-readable names, used in diagnostics and resolver rationales.
DISPLAY_NAMES: dict[Union[EventType, InformationType], str] = {
    EventType.CURRENT_EVENT: "Current event",
    EventType.OLD_EVENT: "Old event",
    EventType.RISK_EVENT: "Risk event",
    EventType.GENERAL: "General",
    EventType.IRRELEVANT: "Irrelevant",
    InformationType.DESCRIPTIVE_EPIDEMIOLOGY: "Descriptive epidemiology",
    InformationType.DISTRIBUTION: "Distribution",
    InformationType.PREVENTIVE_CONTROL_MEASURES: "Preventive and control measures",
    InformationType.TRANSMISSION_PATHWAY: "Transmission pathway",
    InformationType.CONCERN_RISK_FACTORS: "Concern and risk factors",
    InformationType.ECONOMIC_POLITICAL_CONSEQUENCES: "Economic and political consequences",
    InformationType.GENERAL_EPIDEMIOLOGY: "General epidemiology",
}

_INFO_ORDER = {label: i for i, label in enumerate(InformationType)}

Severity = Literal["error", "warning"]
Strictness = Literal["strict", "lenient"]


def parse_label(value: str) -> Union[EventType, InformationType]:
    """Resolve a wire name to its enum member (either level)."""
    for enum_cls in (EventType, InformationType):
        try:
            return enum_cls(value)
        except ValueError:
            continue
    raise UnknownLabel(f"not a known label: {value!r}")


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    severity: Severity


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of the cross-level rules for one annotation."""

    verdict: Literal["valid", "warning", "error"]
    diagnostics: tuple[Diagnostic, ...]

    @classmethod
    def from_diagnostics(cls, diagnostics: Iterable[Diagnostic]) -> "ValidationResult":
        diags = tuple(diagnostics)
        if any(d.severity == "error" for d in diags):
            verdict = "error"
        elif diags:
            verdict = "warning"
        else:
            verdict = "valid"
        return cls(verdict=verdict, diagnostics=diags)

    @property
    def ok(self) -> bool:
        return self.verdict != "error"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "diagnostics": [
                {"code": d.code, "message": d.message, "severity": d.severity}
                for d in self.diagnostics
            ],
        }


@dataclass(frozen=True)
class SentenceAnnotation:
    """One annotator's two-level labelling of one sentence.

    ``candidates`` records the full set an annotator identified in a
    multi-topic sentence before it was resolved to ``information_type``.
    """

    doc_id: str
    sentence_index: int
    annotator_id: str
    event_type: EventType
    information_type: Optional[InformationType] = None
    candidates: Optional[frozenset[InformationType]] = None
    timestamp: Optional[datetime] = None
    revision: int = 0

    def __post_init__(self):
        if self.candidates is not None:
            object.__setattr__(self, "candidates", frozenset(self.candidates))
            if len(self.candidates) < 2:
                raise ValueError("candidates, when present, must contain at least 2 labels")
            if self.information_type not in self.candidates:
                raise ValueError("candidates must contain the chosen information_type")
        if self.timestamp is not None and self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware (UTC)")


_GENERAL_MERGED = frozenset(
    {InformationType.DESCRIPTIVE_EPIDEMIOLOGY, InformationType.TRANSMISSION_PATHWAY}
)
_GENERAL_SOFT = frozenset(
    {
        InformationType.DISTRIBUTION,
        InformationType.PREVENTIVE_CONTROL_MEASURES,
        InformationType.CONCERN_RISK_FACTORS,
        InformationType.ECONOMIC_POLITICAL_CONSEQUENCES,
    }
)


def validate_pair(
    event_type: EventType,
    information_type: Optional[InformationType],
    strictness: Strictness = "strict",
) -> ValidationResult:
    """Apply rules E1-E4 and W1 to one (event, info) combination.

    All triggered diagnostics are returned, never just the first, so a
    caller can surface every problem at once.  Rule E4 (missing
    information type on a non-irrelevant sentence) only fires in strict
    mode; mid-workflow records are legitimately incomplete.
    """
    diags: list[Diagnostic] = []
    if event_type is EventType.IRRELEVANT and information_type is not None:
        diags.append(
            Diagnostic(
                "E1",
                "irrelevant sentences carry no information type "
                f"(got {information_type.value!r})",
                "error",
            )
        )
    if (
        information_type is InformationType.GENERAL_EPIDEMIOLOGY
        and event_type is not EventType.GENERAL
    ):
        diags.append(
            Diagnostic(
                "E2",
                "general_epidemiology is only valid under the general event type "
                f"(got {event_type.value!r})",
                "error",
            )
        )
    if event_type is EventType.GENERAL and information_type in _GENERAL_MERGED:
        diags.append(
            Diagnostic(
                "E3",
                f"{information_type.value!r} is merged into general_epidemiology "
                "under the general event type",
                "error",
            )
        )
    if (
        strictness == "strict"
        and event_type is not EventType.IRRELEVANT
        and information_type is None
    ):
        diags.append(
            Diagnostic(
                "E4",
                "completed annotation of a non-irrelevant sentence needs an "
                "information type",
                "error",
            )
        )
    if event_type is EventType.GENERAL and information_type in _GENERAL_SOFT:
        diags.append(
            Diagnostic(
                "W1",
                f"{information_type.value!r} under the general event type is "
                "unusual; double-check the sentence is not event-specific",
                "warning",
            )
        )
    return ValidationResult.from_diagnostics(diags)


def validate_annotation(
    ann: SentenceAnnotation, strictness: Strictness = "strict"
) -> ValidationResult:
    """Validate one annotation against the cross-level rules."""
    return validate_pair(ann.event_type, ann.information_type, strictness)


def validity_table() -> dict[tuple[EventType, Optional[InformationType]], str]:
    """Materialize the full event x (info-or-absent) verdict matrix (strict).

    40 cells: five event types times seven information types plus the
    absent column.  Kept as a function rather than a constant so it can
    never drift from validate_pair.
    """
    table: dict[tuple[EventType, Optional[InformationType]], str] = {}
    for event in EventType:
        for info in list(InformationType) + [None]:
            table[(event, info)] = validate_pair(event, info, "strict").verdict
    return table


@dataclass(frozen=True)
class PrecedencePolicy:
    """Tiering and consequence relation used to resolve multi-topic sets.

    ``top_tier`` labels always win; when several are present the first
    in the configured order is suggested but flagged ambiguous, because
    no mutual priority between them is defined.  ``consequence_edges``
    point from cause to consequence; a candidate reachable from another
    candidate along these edges is discarded.  ``tie_break_order`` only
    kicks in for leftovers no rule separates, and those results are
    always flagged ambiguous.
    """

    top_tier: tuple[InformationType, ...] = (
        InformationType.TRANSMISSION_PATHWAY,
        InformationType.CONCERN_RISK_FACTORS,
    )
    consequence_edges: frozenset[tuple[InformationType, InformationType]] = frozenset(
        {
            (
                InformationType.DESCRIPTIVE_EPIDEMIOLOGY,
                InformationType.PREVENTIVE_CONTROL_MEASURES,
            ),
            (
                InformationType.PREVENTIVE_CONTROL_MEASURES,
                InformationType.ECONOMIC_POLITICAL_CONSEQUENCES,
            ),
        }
    )
    tie_break_order: tuple[InformationType, ...] = tuple(InformationType)

    def __post_init__(self):
        adjacency: dict[InformationType, set[InformationType]] = {}
        for cause, consequence in self.consequence_edges:
            adjacency.setdefault(cause, set()).add(consequence)
        # Cycle check: DFS with colouring.
        state: dict[InformationType, int] = {}

        def visit(node: InformationType) -> None:
            state[node] = 1
            for nxt in adjacency.get(node, ()):
                if state.get(nxt) == 1:
                    raise ValueError("consequence_edges must be acyclic")
                if state.get(nxt, 0) == 0:
                    visit(nxt)
            state[node] = 2

        for node in adjacency:
            if state.get(node, 0) == 0:
                visit(node)
        touched = {n for edge in self.consequence_edges for n in edge}
        if touched & set(self.top_tier):
            raise ValueError("top_tier labels cannot appear in consequence_edges")
        if len(set(self.tie_break_order)) != len(InformationType):
            raise ValueError("tie_break_order must be a total order on InformationType")

    def reachable(self, source: InformationType, target: InformationType) -> bool:
        """True when target is a (transitive) consequence of source."""
        frontier = [source]
        seen = {source}
        while frontier:
            node = frontier.pop()
            for cause, consequence in self.consequence_edges:
                if cause is node and consequence not in seen:
                    if consequence is target:
                        return True
                    seen.add(consequence)
                    frontier.append(consequence)
        return False


DEFAULT_POLICY = PrecedencePolicy()

# Canned explanations for the common cause/consequence eliminations.
_EDGE_RATIONALES = {
    (
        InformationType.DESCRIPTIVE_EPIDEMIOLOGY,
        InformationType.PREVENTIVE_CONTROL_MEASURES,
    ): "Control measures are consequences of the event.",
    (
        InformationType.PREVENTIVE_CONTROL_MEASURES,
        InformationType.ECONOMIC_POLITICAL_CONSEQUENCES,
    ): "Economic consequences of the ban.",
}


@dataclass(frozen=True)
class Resolution:
    main: InformationType
    ambiguous: bool
    rationale: str

    def to_dict(self) -> dict:
        return {
            "main": self.main.value,
            "ambiguous": self.ambiguous,
            "rationale": self.rationale,
        }


def resolve_primary_label(
    candidates: Iterable[InformationType],
    policy: PrecedencePolicy = DEFAULT_POLICY,
) -> Resolution:
    """Pick the single main label for a multi-topic candidate set.

    Rule 1: priority categories (transmission pathway, concern and risk
    factors by default) win over everything else; if both are present
    the configured order decides but the result is flagged ambiguous.
    Rule 2: drop every candidate that is a transitive consequence of
    another candidate.  A unique survivor is unambiguous; several
    survivors fall back to the tie-break order with the ambiguity flag
    set so a human confirms.
    """
    cand_set = frozenset(candidates)
    if not cand_set:
        raise EmptyCandidates("candidate set is empty")
    if InformationType.GENERAL_EPIDEMIOLOGY in cand_set:
        raise IllegalCandidate(
            "general_epidemiology never co-occurs with other information types"
        )

    if len(cand_set) == 1:
        (only,) = cand_set
        return Resolution(only, False, "Single candidate label.")

    in_top = [label for label in policy.top_tier if label in cand_set]
    if in_top:
        winner = in_top[0]
        if len(in_top) == 1:
            return Resolution(
                winner,
                False,
                f"{DISPLAY_NAMES[winner]} category prevails over the other types.",
            )
        names = " and ".join(DISPLAY_NAMES[label] for label in in_top)
        return Resolution(
            winner,
            True,
            f"{names} are both priority categories with no defined mutual order; "
            "kept the configured order. Confirm the main label manually.",
        )

    eliminated = {
        label
        for label in cand_set
        if any(
            other is not label and policy.reachable(other, label) for other in cand_set
        )
    }
    survivors = sorted(cand_set - eliminated, key=lambda lb: _INFO_ORDER[lb])

    reasons: list[str] = []
    for label in sorted(eliminated, key=lambda lb: _INFO_ORDER[lb]):
        causes = [
            other
            for other in sorted(cand_set, key=lambda lb: _INFO_ORDER[lb])
            if other is not label and policy.reachable(other, label)
        ]
        canned = [c for c in causes if (c, label) in _EDGE_RATIONALES]
        cause = canned[0] if canned else causes[0]
        reasons.append(
            _EDGE_RATIONALES.get(
                (cause, label),
                f"{DISPLAY_NAMES[label]} is a consequence of {DISPLAY_NAMES[cause]}.",
            )
        )

    if len(survivors) == 1:
        return Resolution(survivors[0], False, " ".join(reasons))

    ranked = sorted(survivors, key=policy.tie_break_order.index)
    tie_note = (
        "No precedence relation orders the remaining candidates; kept the first "
        "by the configured tie-break order. Confirm the main label manually."
    )
    rationale = " ".join(reasons + [tie_note]) if reasons else tie_note
    return Resolution(ranked[0], True, rationale)


def label_help(label: Union[EventType, InformationType, str]) -> str:
    """Guideline text for one label: definition, sub-cases, examples."""
    from .guidance import HELP_TEXT  # deferred: guidance imports schema enums

    if isinstance(label, str) and not isinstance(label, (EventType, InformationType)):
        label = parse_label(label)
    return HELP_TEXT[label]
