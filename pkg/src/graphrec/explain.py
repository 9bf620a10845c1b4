"""Why was this candidate recommended? A bounded graph-pattern answer.

The explanation lists up to ``l`` edges present in both documents' cores
(phase 1), then pads with candidate-only edges that touch the shared node
vocabulary (phase 2), to at most ``2l`` entries.  Each entry carries a status
telling the renderer which parts are common ground and which are new:

* Shared             — pair in both cores (solid edge, both nodes colored)
* SubjectNotShared   — only the object is a known input node
* ObjectNotShared    — only the subject is a known input node
* EdgeOnlyNotShared  — both nodes known, the connection itself is new

A candidate edge with neither endpoint known explains nothing and is
dropped.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass

from .corpus import Document, PredicateTaxonomy
from .errors import InvalidLError
from .scoring import CoreEdge, CorpusStats, GraphCore, build_core

DEFAULT_EXPLANATION_BUDGET = 6


class EdgeStatus(enum.Enum):
    SHARED = "Shared"
    SUBJECT_NOT_SHARED = "SubjectNotShared"
    OBJECT_NOT_SHARED = "ObjectNotShared"
    EDGE_ONLY_NOT_SHARED = "EdgeOnlyNotShared"


@dataclass(frozen=True)
class ExplanationEdge:
    subject: str
    subject_type: str
    predicate: str
    object: str
    object_type: str
    status: EdgeStatus
    score: float


@dataclass(frozen=True)
class Explanation:
    entries: tuple[ExplanationEdge, ...]
    budget: int

    def shared_count(self) -> int:
        return sum(1 for e in self.entries if e.status is EdgeStatus.SHARED)

    def __len__(self) -> int:
        return len(self.entries)


def _ordered(edges: list[CoreEdge]) -> list[CoreEdge]:
    return sorted(edges, key=lambda e: (-e.score, e.subject, e.object))


def explain(input_doc: Document, candidate_doc: Document, stats: CorpusStats,
            taxonomy: PredicateTaxonomy, budget: int = DEFAULT_EXPLANATION_BUDGET, *,
            input_core: GraphCore | None = None,
            candidate_core: GraphCore | None = None) -> Explanation:
    """Two-phase edge selection between the input and candidate cores.

    Phase 1 entries use the input core's edge and its input-side score (the
    same weight the ranking saw); phase 2 entries use the candidate core's
    edge and candidate-side score.  Both phases order by score descending
    with (subject, object) as the deterministic tie-break.
    """
    if budget < 1:
        raise InvalidLError(f"explanation budget must be >= 1, got {budget}")
    if input_core is None:
        input_core = build_core(input_doc, stats, taxonomy)
    if candidate_core is None:
        candidate_core = build_core(candidate_doc, stats, taxonomy)

    shared_pairs = input_core.pairs() & candidate_core.pairs()
    input_nodes = input_core.nodes()

    entries: list[ExplanationEdge] = []
    for edge in _ordered([input_core.get(pair) for pair in shared_pairs]):
        if len(entries) >= budget:
            break
        entries.append(ExplanationEdge(edge.subject, edge.subject_type, edge.predicate,
                                       edge.object, edge.object_type,
                                       EdgeStatus.SHARED, edge.score))

    candidate_only = [candidate_core.get(pair)
                      for pair in candidate_core.pairs() - shared_pairs]
    for edge in _ordered(candidate_only):
        if len(entries) >= 2 * budget:
            break
        subject_known = edge.subject in input_nodes
        object_known = edge.object in input_nodes
        if subject_known and object_known:
            status = EdgeStatus.EDGE_ONLY_NOT_SHARED
        elif subject_known:
            status = EdgeStatus.OBJECT_NOT_SHARED
        elif object_known:
            status = EdgeStatus.SUBJECT_NOT_SHARED
        else:
            continue
        entries.append(ExplanationEdge(edge.subject, edge.subject_type, edge.predicate,
                                       edge.object, edge.object_type, status, edge.score))

    return Explanation(entries=tuple(entries), budget=budget)


def explanation_records(explanation: Explanation) -> list[dict]:
    """JSON-ready records for the service and CLI."""
    return [
        {
            "subject": e.subject,
            "subject_type": e.subject_type,
            "predicate": e.predicate,
            "object": e.object,
            "object_type": e.object_type,
            "status": e.status.value,
            "score": e.score,
        }
        for e in explanation.entries
    ]


#: Fixed palette for well-known biomedical concept types (case-insensitive).
TYPE_COLORS = {
    "drug": "#d62728",
    "disease": "#2ca02c",
    "gene": "#1f77b4",
    "chemical": "#9467bd",
    "species": "#8c564b",
    "mutation": "#e377c2",
    "variant": "#e377c2",
    "cellline": "#17becf",
    "dosageform": "#bcbd22",
    "excipient": "#ff7f0e",
    "method": "#7f7f7f",
    "labmethod": "#aec7e8",
    "healthstatus": "#98df8a",
    "target": "#ffbb78",
    "organism": "#c5b0d5",
    "tissue": "#c49c94",
    "vaccine": "#f7b6d2",
}

_FALLBACK_PALETTE = (
    "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173",
    "#5254a3", "#8ca252", "#bd9e39", "#ad494a", "#a55194",
)


def color_for_type(concept_type: str) -> str:
    """Stable color for a concept type, hashed into a fallback palette when unknown."""
    known = TYPE_COLORS.get(concept_type.lower())
    if known is not None:
        return known
    digest = hashlib.md5(concept_type.lower().encode("utf-8")).hexdigest()
    return _FALLBACK_PALETTE[int(digest, 16) % len(_FALLBACK_PALETTE)]


def color_map(concept_types) -> dict[str, str]:
    return {t: color_for_type(t) for t in sorted(set(concept_types))}
