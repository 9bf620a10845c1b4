"""Second retrieval stage: graph overlap plus lexical score, fused.

Candidates from the first stage are re-scored two ways — the sum of
input-side edge scores over node pairs shared by both graph cores, and BM25
of the input's full text against the candidate — then each component is
divided by its maximum over the candidate list and combined as a weighted
sum.  With the default weights 0.6/0.4 both components matter but the graph
dominates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .corpus import Document, PredicateTaxonomy
from .firststage import CutoffMode, FirstStageResult, Strategy
from .indexes import Bm25Index
from .scoring import CorpusStats, GraphCore, PairKey, build_core, core_pairs

DEFAULT_W_GRAPH = 0.6
DEFAULT_W_TEXT = 0.4
DEFAULT_TOP_N = 100


@dataclass(frozen=True)
class RecommendationConfig:
    """Weights, first-stage settings, and output length."""

    w_graph: float = DEFAULT_W_GRAPH
    w_text: float = DEFAULT_W_TEXT
    strategy: Strategy = Strategy.CONCEPT
    k: int = 1000
    cutoff: CutoffMode = CutoffMode.FLEXIBLE
    top_n: int | None = DEFAULT_TOP_N

    def __post_init__(self):
        if self.w_graph < 0 or self.w_text < 0:
            raise ValueError("weights must be >= 0")
        if self.w_graph + self.w_text <= 0:
            raise ValueError("at least one weight must be positive")
        if self.top_n is not None and self.top_n < 1:
            raise ValueError("top_n must be >= 1 or None")


@dataclass(frozen=True)
class ScoredCandidate:
    doc_id: int
    core_overlap_raw: float
    bm25_raw: float
    core_overlap_norm: float
    bm25_norm: float
    fused: float


def core_overlap(input_doc: Document, candidate_doc: Document, stats: CorpusStats,
                 taxonomy: PredicateTaxonomy, *, input_core: GraphCore | None = None,
                 candidate_pairs: frozenset[PairKey] | None = None) -> float:
    """Sum of the input core's edge scores over pairs both cores contain.

    Candidate-side edge content never enters the value: a pair either matches
    or it does not, and the weight always comes from the input document.
    """
    if input_core is None:
        input_core = build_core(input_doc, stats, taxonomy)
    if candidate_pairs is None:
        candidate_pairs = core_pairs(candidate_doc)
    shared = input_core.pairs() & candidate_pairs
    return sum(input_core.get(pair).score for pair in sorted(shared))


def max_normalize(raw: Mapping[int, float]) -> dict[int, float]:
    """Divide by the list maximum; an all-zero component stays all-zero."""
    peak = max(raw.values(), default=0.0)
    if peak <= 0.0:
        return {doc_id: 0.0 for doc_id in raw}
    return {doc_id: value / peak for doc_id, value in raw.items()}


def second_stage(input_doc: Document, first_stage: FirstStageResult,
                 input_core: GraphCore, pairs_of: Callable[[int], frozenset[PairKey]],
                 query_tokens: Sequence[str], bm25: Bm25Index,
                 config: RecommendationConfig) -> list[ScoredCandidate]:
    """Score, normalize, fuse, and order the first-stage candidates.

    When the input core is empty there is nothing to overlap, so candidates
    keep their first-stage order; the fused value (then just the weighted
    text component) is still reported.  Otherwise the fused score orders the
    list, ties broken by doc_id descending.
    """
    candidate_ids = first_stage.doc_ids()
    input_pairs = input_core.pairs()

    overlap_raw: dict[int, float] = {}
    for doc_id in candidate_ids:
        if input_pairs:
            shared = input_pairs & pairs_of(doc_id)
            overlap_raw[doc_id] = sum(input_core.get(pair).score for pair in sorted(shared))
        else:
            overlap_raw[doc_id] = 0.0
    bm25_raw = bm25.batch_scores(query_tokens, candidate_ids)

    overlap_norm = max_normalize(overlap_raw)
    bm25_norm = max_normalize(bm25_raw)

    scored = [
        ScoredCandidate(
            doc_id=doc_id,
            core_overlap_raw=overlap_raw[doc_id],
            bm25_raw=bm25_raw[doc_id],
            core_overlap_norm=overlap_norm[doc_id],
            bm25_norm=bm25_norm[doc_id],
            fused=config.w_graph * overlap_norm[doc_id] + config.w_text * bm25_norm[doc_id],
        )
        for doc_id in candidate_ids
    ]
    if input_pairs:
        scored.sort(key=lambda c: (-c.fused, -c.doc_id))
    if config.top_n is not None:
        scored = scored[: config.top_n]
    return scored


def format_run_lines(topic: str, candidates: Iterable[ScoredCandidate], tag: str) -> list[str]:
    """Standard shared-task run rows: topic Q0 doc rank score tag."""
    lines = []
    for rank, candidate in enumerate(candidates, start=1):
        lines.append(f"{topic} Q0 {candidate.doc_id} {rank} {candidate.fused!r} {tag}")
    return lines
