"""Shared fixtures: the bundled 25-document corpus and cheap builders."""
from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from graphrec.corpus import (Corpus, ConceptAnnotation, Document, PredicateTaxonomy,
                             Statement, load_corpus, load_taxonomy)
from graphrec.engine import RecommendationEngine
from graphrec.indexes import IndexConfig, build_indexes

DATA = Path(__file__).resolve().parent / "data"
SYNTH25 = DATA / "synth25.jsonl"
TAXONOMY25 = DATA / "taxonomy25.tsv"


def make_doc(doc_id: int, concepts, statements=(), *, title="t", pad_to=100) -> Document:
    """Assemble a Document directly, bypassing the text parser.

    ``concepts`` is a list of (concept, type, start) triples — mention text is
    synthesized, end = start + 1.  ``statements`` is a list of
    (subject, stype, predicate, object, otype, confidence).  ``pad_to`` fixes
    text_length so coverage values are easy to reason about.
    """
    anns = tuple(ConceptAnnotation(c, t, s, s + 1, "x") for (c, t, s) in concepts)
    stmts = tuple(Statement(s, st, p, o, ot, sentence="", confidence=conf)
                  for (s, st, p, o, ot, conf) in statements)
    abstract_len = max(pad_to - len(title) - 1, 1)
    return Document(doc_id=doc_id, title=title, abstract="a" * abstract_len,
                    concepts=anns, statements=stmts)


@pytest.fixture(scope="session")
def taxonomy25() -> PredicateTaxonomy:
    return load_taxonomy(TAXONOMY25)


@pytest.fixture(scope="session")
def corpus25(taxonomy25) -> Corpus:
    return load_corpus(SYNTH25, taxonomy25)


@pytest.fixture(scope="session")
def indexes25(corpus25):
    return build_indexes(corpus25, IndexConfig())


@pytest.fixture(scope="session")
def engine25(corpus25, indexes25) -> RecommendationEngine:
    return RecommendationEngine(indexes25, corpus25)


@pytest.fixture(scope="session")
def bench2000():
    from graphrec.synth import build_benchmark
    return build_benchmark(seed=7, topics=8, total_docs=2000)
