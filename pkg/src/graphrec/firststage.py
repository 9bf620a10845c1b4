"""First retrieval stage: cheap candidate generation from posting lists.

Three interchangeable strategies walk an index with the input document's
features and accumulate per-candidate scores:

* ``core``    — input core edges against the edge index, weighted by the
                input-side edge score
* ``node``    — input annotations against the node index, weighted by the
                input-side node score
* ``concept`` — input annotations against the concept index (the broadest)

followed by a hard or plateau-aware ("flexible") cutoff.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Collection, Mapping

from .corpus import Document, PredicateTaxonomy
from .errors import InvalidKError
from .indexes import IndexSet
from .scoring import GraphCore, build_core, concept_idf, node_coverage, concept_tf


class Strategy(enum.Enum):
    CORE = "core"
    NODE = "node"
    CONCEPT = "concept"


class CutoffMode(enum.Enum):
    HARD = "hard"
    FLEXIBLE = "flexible"


@dataclass(frozen=True)
class FirstStageResult:
    """Ranked candidate list: score descending, doc_id descending on ties."""

    entries: tuple[tuple[int, float], ...]
    strategy: Strategy
    cutoff: CutoffMode

    def doc_ids(self) -> list[int]:
        return [doc_id for doc_id, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def _distinct_annotated_concepts(doc: Document) -> list[str]:
    """Distinct annotated concepts in first-appearance order.

    The order fixes the floating-point accumulation order, which keeps
    repeated runs bit-identical.
    """
    seen = set()
    ordered = []
    for ann in doc.concepts:
        if ann.concept not in seen:
            seen.add(ann.concept)
            ordered.append(ann.concept)
    return ordered


def _finish(scores: dict[int, float], doc: Document,
            universe: Collection[int] | None) -> dict[int, float]:
    scores.pop(doc.doc_id, None)
    if universe is not None:
        scores = {doc_id: s for doc_id, s in scores.items() if doc_id in universe}
    return scores


def fs_core(doc: Document, indexes: IndexSet, taxonomy: PredicateTaxonomy,
            universe: Collection[int] | None = None,
            core: GraphCore | None = None) -> dict[int, float]:
    """Candidates sharing any edge (regardless of predicate) with the input core.

    Every document listed under a core edge's unordered pair accumulates that
    edge's input-side score.  Edges with a generically-too-frequent endpoint
    are skipped, mirroring the node/concept strategies.
    """
    if core is None:
        core = build_core(doc, indexes.stats, taxonomy)
    blocked = indexes.generic_filter
    scores: dict[int, float] = {}
    for edge in core:  # sorted pair order: deterministic accumulation
        if edge.subject in blocked or edge.object in blocked:
            continue
        for doc_id in indexes.edges.docs(edge.pair):
            scores[doc_id] = scores.get(doc_id, 0.0) + edge.score
    return _finish(scores, doc, universe)


def _fs_annotations(doc: Document, indexes: IndexSet, posting_index,
                    universe: Collection[int] | None) -> dict[int, float]:
    blocked = indexes.generic_filter
    stats = indexes.stats
    scores: dict[int, float] = {}
    for concept in _distinct_annotated_concepts(doc):
        if concept in blocked:
            continue
        postings = posting_index.docs(concept)
        if not postings:
            continue
        weight = node_coverage(concept, doc) * concept_tf(concept, doc) * concept_idf(concept, stats)
        for doc_id in postings:
            scores[doc_id] = scores.get(doc_id, 0.0) + weight
    return _finish(scores, doc, universe)


def fs_node(doc: Document, indexes: IndexSet,
            universe: Collection[int] | None = None) -> dict[int, float]:
    """Candidates whose graphs contain the input's annotated concepts as nodes."""
    return _fs_annotations(doc, indexes, indexes.nodes, universe)


def fs_concept(doc: Document, indexes: IndexSet,
               universe: Collection[int] | None = None) -> dict[int, float]:
    """Candidates annotated with the input's concepts anywhere in their text."""
    return _fs_annotations(doc, indexes, indexes.concepts, universe)


def rank_candidates(scores: Mapping[int, float]) -> list[tuple[int, float]]:
    """Score descending; among equal scores, larger (newer) doc_id first."""
    return sorted(scores.items(), key=lambda item: (-item[1], -item[0]))


def apply_cutoff(scores: Mapping[int, float], k: int, mode: CutoffMode,
                 strategy: Strategy) -> FirstStageResult:
    """Rank the accumulated scores and truncate.

    Hard keeps the top k.  Flexible keeps the top k, then extends through
    every further entry tied with the rank-k score, capped at 2k entries.
    """
    if k < 1:
        raise InvalidKError(f"cutoff k must be >= 1, got {k}")
    ranked = rank_candidates(scores)
    if mode is CutoffMode.HARD or len(ranked) <= k:
        kept = ranked[:k]
    else:
        plateau = ranked[k - 1][1]
        end = k
        limit = min(len(ranked), 2 * k)
        while end < limit and ranked[end][1] == plateau:
            end += 1
        kept = ranked[:end]
    return FirstStageResult(entries=tuple(kept), strategy=strategy, cutoff=mode)


def run_first_stage(doc: Document, indexes: IndexSet, taxonomy: PredicateTaxonomy,
                    strategy: Strategy, k: int, mode: CutoffMode,
                    universe: Collection[int] | None = None,
                    core: GraphCore | None = None) -> FirstStageResult:
    if strategy is Strategy.CORE:
        scores = fs_core(doc, indexes, taxonomy, universe, core=core)
    elif strategy is Strategy.NODE:
        scores = fs_node(doc, indexes, universe)
    else:
        scores = fs_concept(doc, indexes, universe)
    return apply_cutoff(scores, k, mode, strategy)
