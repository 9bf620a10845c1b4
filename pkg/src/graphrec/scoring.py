"""Concept and interaction scoring over annotated documents.

Every document induces a small graph: annotated concepts are nodes, extracted
statements are candidate edges.  The *core* keeps, for each unordered pair of
concepts with different types, the single best-scored statement.  All weights
here are plain functions of annotation counts, span positions, corpus
document frequencies, statement confidences and predicate specificity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .corpus import Corpus, Document, PredicateTaxonomy
from .errors import ConceptAbsentError, NoSupportError

PairKey = tuple[str, str]

#: Predicate taxonomy level -> specificity weight.
SPECIFICITY = {1: 1.0, 2: 0.5, 3: 0.25}


def pair_key(a: str, b: str) -> PairKey:
    """Canonical (sorted) key for an unordered concept pair."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class CorpusStats:
    """Corpus-level constants needed for scoring: size and document frequencies."""

    corpus_size: int
    df: dict[str, int]

    def document_frequency(self, concept: str) -> int:
        return self.df.get(concept, 0)


def compute_stats(corpus: Corpus) -> CorpusStats:
    """Count, for every concept, the number of documents annotating it."""
    df: dict[str, int] = {}
    for doc in corpus:
        for concept in {a.concept for a in doc.concepts}:
            df[concept] = df.get(concept, 0) + 1
    return CorpusStats(corpus_size=len(corpus), df=df)


def _annotation_summary(doc: Document) -> tuple[int, dict[str, tuple[int, int, int]]]:
    """Total annotation count and per-concept (count, first_start, last_start)."""
    total = 0
    summary: dict[str, tuple[int, int, int]] = {}
    for ann in doc.concepts:
        total += 1
        prev = summary.get(ann.concept)
        if prev is None:
            summary[ann.concept] = (1, ann.start, ann.start)
        else:
            count, first, last = prev
            summary[ann.concept] = (count + 1, min(first, ann.start), max(last, ann.start))
    return total, summary


def concept_tf(concept: str, doc: Document) -> float:
    """Share of the document's annotation instances that mention this concept.

    0.0 when the concept is not annotated, and 0.0 for a document with no
    annotations at all (0/0 guard).
    """
    total, summary = _annotation_summary(doc)
    if total == 0 or concept not in summary:
        return 0.0
    return summary[concept][0] / total


def concept_idf(concept: str, stats: CorpusStats) -> float:
    """Natural-log inverse document frequency; unseen concepts count as df = 1."""
    df = max(1, stats.document_frequency(concept))
    return math.log(stats.corpus_size / df)


def node_tf_idf(concept: str, doc: Document, stats: CorpusStats) -> float:
    return concept_tf(concept, doc) * concept_idf(concept, stats)


def node_coverage(concept: str, doc: Document) -> float:
    """Spread of a concept's mentions: (last start - first start) / text length."""
    _, summary = _annotation_summary(doc)
    if concept not in summary:
        raise ConceptAbsentError(f"concept {concept!r} not annotated in document {doc.doc_id}")
    if doc.text_length == 0:
        return 0.0
    _, first, last = summary[concept]
    return (last - first) / doc.text_length


def node_score(concept: str, doc: Document, stats: CorpusStats) -> float:
    return node_coverage(concept, doc) * node_tf_idf(concept, doc, stats)


def predicate_specificity(predicate: str, taxonomy: PredicateTaxonomy) -> float:
    return SPECIFICITY[taxonomy.level(predicate)]


def edge_tf_idf(subject: str, predicate: str, obj: str, doc: Document,
                stats: CorpusStats, taxonomy: PredicateTaxonomy) -> float:
    """Endpoint tf-idf sum, damped by how specific the predicate is."""
    endpoint_sum = node_tf_idf(subject, doc, stats) + node_tf_idf(obj, doc, stats)
    return endpoint_sum * predicate_specificity(predicate, taxonomy)


def edge_coverage(subject: str, obj: str, doc: Document) -> float:
    """An edge only spreads as far as its least-spread endpoint."""
    return min(node_coverage(subject, doc), node_coverage(obj, doc))


def edge_confidence(subject: str, predicate: str, obj: str, doc: Document) -> float:
    """Best extraction confidence among statements asserting this exact triple."""
    best = None
    for st in doc.statements:
        if st.subject == subject and st.predicate == predicate and st.object == obj:
            if best is None or st.confidence > best:
                best = st.confidence
    if best is None:
        raise NoSupportError(
            f"no statement ({subject!r}, {predicate!r}, {obj!r}) in document {doc.doc_id}")
    return best


def edge_score(subject: str, predicate: str, obj: str, doc: Document,
               stats: CorpusStats, taxonomy: PredicateTaxonomy) -> float:
    return (edge_confidence(subject, predicate, obj, doc)
            * edge_coverage(subject, obj, doc)
            * edge_tf_idf(subject, predicate, obj, doc, stats, taxonomy))


@dataclass(frozen=True)
class CoreEdge:
    """The winning statement for one unordered concept pair."""

    subject: str
    subject_type: str
    predicate: str
    object: str
    object_type: str
    score: float

    @property
    def pair(self) -> PairKey:
        return pair_key(self.subject, self.object)


class GraphCore:
    """Per-document graph core: at most one scored edge per unordered pair."""

    def __init__(self, edges: Iterable[CoreEdge]):
        self._edges: dict[PairKey, CoreEdge] = {}
        for edge in edges:
            key = edge.pair
            if key in self._edges:
                raise ValueError(f"duplicate core pair {key}")
            self._edges[key] = edge

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, key: PairKey) -> bool:
        return key in self._edges

    def __iter__(self) -> Iterator[CoreEdge]:
        for key in sorted(self._edges):
            yield self._edges[key]

    def get(self, key: PairKey) -> CoreEdge:
        return self._edges[key]

    def pairs(self) -> frozenset[PairKey]:
        return frozenset(self._edges)

    def nodes(self) -> frozenset[str]:
        seen = set()
        for a, b in self._edges:
            seen.add(a)
            seen.add(b)
        return frozenset(seen)


def core_pairs(doc: Document) -> frozenset[PairKey]:
    """Unordered cross-type pairs of a document's statements, without scoring.

    This equals build_core(doc).pairs() — best-edge selection changes labels
    and weights but never the pair set — and is the cheap form used for
    overlap computations.
    """
    return frozenset(pair_key(st.subject, st.object)
                     for st in doc.statements
                     if st.subject_type != st.object_type)


def graph_pairs(doc: Document) -> frozenset[PairKey]:
    """All unordered endpoint pairs of a document's statements (full graph)."""
    return frozenset(pair_key(st.subject, st.object) for st in doc.statements)


def graph_nodes(doc: Document) -> frozenset[str]:
    """Statement endpoints that also carry an annotation in the concept layer."""
    annotated = {a.concept for a in doc.concepts}
    nodes = set()
    for st in doc.statements:
        if st.subject in annotated:
            nodes.add(st.subject)
        if st.object in annotated:
            nodes.add(st.object)
    return frozenset(nodes)


def build_core(doc: Document, stats: CorpusStats, taxonomy: PredicateTaxonomy) -> GraphCore:
    """Score the document's statements and keep the best edge per pair.

    Statements whose endpoints share a concept type are excluded.  Endpoints
    that carry no annotation in the concept layer contribute zero tf-idf and
    zero coverage, so such edges stay in the core with score 0.0.  Ties are
    broken toward the lexicographically smallest predicate, then subject, so
    the core never depends on statement order.
    """
    total, summary = _annotation_summary(doc)

    def safe_tf_idf(concept: str) -> float:
        if total == 0 or concept not in summary:
            return 0.0
        return (summary[concept][0] / total) * concept_idf(concept, stats)

    def safe_coverage(concept: str) -> float:
        if concept not in summary or doc.text_length == 0:
            return 0.0
        _, first, last = summary[concept]
        return (last - first) / doc.text_length

    # Best confidence per directed triple, plus the endpoint types of its
    # first occurrence.
    triple_conf: dict[tuple[str, str, str], float] = {}
    triple_types: dict[tuple[str, str, str], tuple[str, str]] = {}
    for st in doc.statements:
        if st.subject_type == st.object_type:
            continue
        triple = (st.subject, st.predicate, st.object)
        if triple not in triple_conf or st.confidence > triple_conf[triple]:
            triple_conf[triple] = st.confidence
        triple_types.setdefault(triple, (st.subject_type, st.object_type))

    best: dict[PairKey, CoreEdge] = {}
    for triple in sorted(triple_conf):
        subject, predicate, obj = triple
        spec = SPECIFICITY[taxonomy.level(predicate)]
        tf_idf = (safe_tf_idf(subject) + safe_tf_idf(obj)) * spec
        coverage = min(safe_coverage(subject), safe_coverage(obj))
        score = triple_conf[triple] * coverage * tf_idf
        subject_type, object_type = triple_types[triple]
        edge = CoreEdge(subject, subject_type, predicate, obj, object_type, score)
        key = edge.pair
        incumbent = best.get(key)
        if incumbent is None or _edge_order(edge) < _edge_order(incumbent):
            best[key] = edge
    return GraphCore(best.values())


def _edge_order(edge: CoreEdge) -> tuple[float, str, str]:
    return (-edge.score, edge.predicate, edge.subject)
