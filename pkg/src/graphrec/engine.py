"""One object tying corpus, indexes, and both retrieval stages together.

The engine owns the immutable IndexSet plus a lazy document store, and
fronts every operation the CLI and HTTP service expose: ranked
recommendation, explanation, and the per-document graph view.  Graph cores,
pair sets, and query token lists are memoized per document — the caches only
ever fill in values that are pure functions of the document, so concurrent
readers can share one engine.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from .corpus import (Corpus, Document, DocumentStore, PredicateTaxonomy, document_to_record,
                     load_taxonomy, save_taxonomy)
from .errors import UnknownDocumentError
from .explain import Explanation, explain
from .firststage import FirstStageResult, run_first_stage
from .indexes import IndexConfig, IndexSet, build_indexes, load_indexes, save_indexes
from .recommend import RecommendationConfig, ScoredCandidate, second_stage
from .scoring import CoreEdge, GraphCore, PairKey, build_core, core_pairs
from .tokenizer import tokenize

log = logging.getLogger(__name__)

DOCUMENTS_NAME = "documents.jsonl"
TAXONOMY_NAME = "taxonomy.tsv"

DEFAULT_GRAPH_STATEMENTS = 10


class RecommendationEngine:
    def __init__(self, indexes: IndexSet, store: DocumentStore):
        self.indexes = indexes
        self.store = store
        self.taxonomy: PredicateTaxonomy = store.taxonomy
        self._cores: dict[int, GraphCore] = {}
        self._pairs: dict[int, frozenset[PairKey]] = {}
        self._tokens: dict[int, list[str]] = {}

    # -- construction --------------------------------------------------

    @classmethod
    def from_index_dir(cls, directory: str | Path) -> "RecommendationEngine":
        directory = Path(directory)
        indexes = load_indexes(directory)
        taxonomy = load_taxonomy(directory / TAXONOMY_NAME)
        store = DocumentStore(directory / DOCUMENTS_NAME, taxonomy)
        return cls(indexes, store)

    @classmethod
    def build_index_dir(cls, corpus: Corpus, directory: str | Path,
                        config: IndexConfig | None = None) -> IndexSet:
        """Build indexes and persist everything an engine needs to start."""
        directory = Path(directory)
        indexes = build_indexes(corpus, config)
        save_indexes(indexes, directory)
        with open(directory / DOCUMENTS_NAME, "w", encoding="utf-8") as handle:
            for doc_id in sorted(corpus.documents):
                record = document_to_record(corpus.documents[doc_id])
                handle.write(json.dumps(record, ensure_ascii=False))
                handle.write("\n")
        save_taxonomy(corpus.taxonomy, directory / TAXONOMY_NAME)
        return indexes

    # -- cached per-document features -----------------------------------

    def document(self, doc_id: int) -> Document:
        return self.store.get(doc_id)

    def core(self, doc_id: int) -> GraphCore:
        if doc_id not in self._cores:
            self._cores[doc_id] = build_core(self.document(doc_id), self.indexes.stats,
                                             self.taxonomy)
        return self._cores[doc_id]

    def pairs(self, doc_id: int) -> frozenset[PairKey]:
        if doc_id not in self._pairs:
            self._pairs[doc_id] = core_pairs(self.document(doc_id))
        return self._pairs[doc_id]

    def query_tokens(self, doc_id: int) -> list[str]:
        if doc_id not in self._tokens:
            self._tokens[doc_id] = tokenize(self.document(doc_id).text,
                                            stemming=self.indexes.config.stemming)
        return self._tokens[doc_id]

    # -- retrieval -------------------------------------------------------

    def first_stage(self, doc_id: int, config: RecommendationConfig,
                    universe=None) -> FirstStageResult:
        doc = self.document(doc_id)
        return run_first_stage(doc, self.indexes, self.taxonomy, config.strategy,
                               config.k, config.cutoff, universe, core=self.core(doc_id))

    def recommend(self, doc_id: int, config: RecommendationConfig | None = None,
                  universe=None) -> list[ScoredCandidate]:
        config = config or RecommendationConfig()
        doc = self.document(doc_id)
        stage_one = self.first_stage(doc_id, config, universe)
        return second_stage(doc, stage_one, self.core(doc_id), self.pairs,
                            self.query_tokens(doc_id), self.indexes.bm25, config)

    def explain_pair(self, input_id: int, candidate_id: int, budget: int) -> Explanation:
        return explain(self.document(input_id), self.document(candidate_id),
                       self.indexes.stats, self.taxonomy, budget,
                       input_core=self.core(input_id),
                       candidate_core=self.core(candidate_id))

    # -- views -----------------------------------------------------------

    def document_graph(self, doc_id: int, max_statements: int = DEFAULT_GRAPH_STATEMENTS,
                       types: set[str] | None = None) -> list[CoreEdge]:
        """Top-scored core edges for display; both endpoint types must be enabled."""
        if max_statements < 0:
            raise ValueError("max_statements must be >= 0")
        edges = list(self.core(doc_id))
        if types is not None:
            edges = [e for e in edges if e.subject_type in types and e.object_type in types]
        edges.sort(key=lambda e: (-e.score, e.pair))
        return edges[:max_statements]

    def concept_label(self, doc_id: int, concept: str) -> str:
        """Most frequent surface mention of the concept, earliest on ties."""
        counts: dict[str, int] = {}
        first_seen: dict[str, int] = {}
        for position, ann in enumerate(self.document(doc_id).concepts):
            if ann.concept != concept:
                continue
            counts[ann.mention] = counts.get(ann.mention, 0) + 1
            first_seen.setdefault(ann.mention, position)
        if not counts:
            return concept
        return min(counts, key=lambda mention: (-counts[mention], first_seen[mention]))

    def concept_types(self, doc_id: int) -> dict[str, str]:
        """concept -> type, from annotations first, statement endpoints as fallback."""
        mapping: dict[str, str] = {}
        doc = self.document(doc_id)
        for ann in doc.concepts:
            mapping.setdefault(ann.concept, ann.concept_type)
        for st in doc.statements:
            mapping.setdefault(st.subject, st.subject_type)
            mapping.setdefault(st.object, st.object_type)
        return mapping

    def has_document(self, doc_id: int) -> bool:
        return doc_id in self.store

    def corpus_size(self) -> int:
        return self.indexes.stats.corpus_size

    def about_text(self) -> str:
        return (
            "Recommendations are computed in two stages. First, documents that "
            "share annotated concepts (or graph structure, depending on the "
            "configured strategy) with the seed document are gathered from "
            "inverted indexes and ranked by concept weights that combine how "
            "often and how widely a concept is mentioned with how rare it is in "
            "the whole collection. Second, each candidate is scored two ways: "
            "by the summed weight of statement edges its graph shares with the "
            "seed's graph, and by BM25 text similarity of titles and abstracts. "
            "Both scores are normalized to [0, 1] over the candidate list and "
            "combined as a weighted sum (graph weight 0.6, text weight 0.4 by "
            "default). The little graphs next to each result show which "
            "statements the two documents share (solid, colored) and which are "
            "new in the recommended document (dashed, gray endpoints)."
        )
