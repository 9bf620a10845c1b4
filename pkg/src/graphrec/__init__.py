"""Explainable graph-based related-document recommendation.

Documents annotated with vocabulary concepts and subject-predicate-object
statements are matched in two stages: cheap posting-list retrieval over
concepts, graph nodes, or graph edges, then a fused ranking of graph-core
overlap and BM25 text similarity.  Every recommendation can be explained as
a small labeled graph of shared and candidate-only statements.
"""

from .corpus import (Corpus, Document, DocumentStore, PredicateTaxonomy,
                     load_corpus, load_filter_file, load_taxonomy, save_corpus)
from .engine import RecommendationEngine
from .errors import GraphRecError
from .evalkit import Qrels, RunList, load_qrels, load_run
from .explain import Explanation, ExplanationEdge, EdgeStatus, explain
from .firststage import CutoffMode, FirstStageResult, Strategy
from .indexes import IndexConfig, IndexSet, build_indexes, load_indexes, save_indexes
from .recommend import RecommendationConfig, ScoredCandidate
from .scoring import CoreEdge, CorpusStats, GraphCore, build_core, compute_stats

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Document", "DocumentStore", "PredicateTaxonomy",
    "load_corpus", "load_filter_file", "load_taxonomy", "save_corpus",
    "RecommendationEngine", "GraphRecError",
    "Qrels", "RunList", "load_qrels", "load_run",
    "Explanation", "ExplanationEdge", "EdgeStatus", "explain",
    "CutoffMode", "FirstStageResult", "Strategy",
    "IndexConfig", "IndexSet", "build_indexes", "load_indexes", "save_indexes",
    "RecommendationConfig", "ScoredCandidate",
    "CoreEdge", "CorpusStats", "GraphCore", "build_core", "compute_stats",
    "__version__",
]
