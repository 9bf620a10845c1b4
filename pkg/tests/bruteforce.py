"""Independent full-scan reference implementation used by the test suite.

Every function here recomputes scores directly from ``Document`` values with
plain dictionaries and loops — no posting lists, no indexes, no caches, no
imports from the engine's scoring or retrieval modules — so that agreement
between this file and the library is meaningful.  Where the documented
contract fixes an evaluation order (first-appearance concept order, sorted
pair order, first-appearance query-term order, the (-score, predicate,
subject) tie-break), this file follows the contract, not the library code.

Tokenization is shared with the engine deliberately: it is interchange
plumbing, not part of the scored model, and duplicating the stemmer would
only test a copy against itself.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from graphrec.corpus import Document, PredicateTaxonomy
from graphrec.tokenizer import tokenize

SPECIFICITY = {1: 1.0, 2: 0.5, 3: 0.25}
K1 = 1.2
B = 0.75


def pair_of(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


# --------------------------------------------------------------------------
# corpus statistics and per-concept quantities
# --------------------------------------------------------------------------

def bf_df(docs: dict[int, Document]) -> dict[str, int]:
    df: dict[str, int] = {}
    for doc in docs.values():
        for concept in {c.concept for c in doc.concepts}:
            df[concept] = df.get(concept, 0) + 1
    return df


def bf_tf(doc: Document, concept: str) -> float:
    total = len(doc.concepts)
    if total == 0:
        return 0.0
    return sum(1 for c in doc.concepts if c.concept == concept) / total


def bf_idf(df: dict[str, int], n: int, concept: str) -> float:
    return math.log(n / max(df.get(concept, 0), 1))


def bf_coverage(doc: Document, concept: str) -> float | None:
    """None if the concept is unannotated (callers decide how to handle it)."""
    starts = [c.start for c in doc.concepts if c.concept == concept]
    if not starts:
        return None
    if doc.text_length == 0:
        return 0.0
    return (max(starts) - min(starts)) / doc.text_length


def bf_node_score(doc: Document, df: dict[str, int], n: int, concept: str) -> float:
    coverage = bf_coverage(doc, concept)
    if coverage is None:
        raise ValueError(f"{concept!r} not annotated")
    return coverage * bf_tf(doc, concept) * bf_idf(df, n, concept)


# --------------------------------------------------------------------------
# document core (one best edge per unordered cross-type pair)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BfEdge:
    subject: str
    subject_type: str
    predicate: str
    object: str
    object_type: str
    score: float

    @property
    def pair(self) -> tuple[str, str]:
        return pair_of(self.subject, self.object)


def bf_core(doc: Document, df: dict[str, int], n: int,
            taxonomy: PredicateTaxonomy) -> dict[tuple[str, str], BfEdge]:
    annotated = {c.concept for c in doc.concepts}

    def safe_tfidf(concept: str) -> float:
        if concept not in annotated:
            return 0.0
        return bf_tf(doc, concept) * bf_idf(df, n, concept)

    def safe_cov(concept: str) -> float:
        coverage = bf_coverage(doc, concept)
        return 0.0 if coverage is None else coverage

    # one candidate edge per directed triple, carrying the best confidence
    # and the first-stated endpoint types
    triples: dict[tuple[str, str, str], tuple[float, str, str]] = {}
    for s in doc.statements:
        if s.subject_type == s.object_type or s.subject == s.object:
            continue
        key = (s.subject, s.predicate, s.object)
        if key in triples:
            conf, st, ot = triples[key]
            triples[key] = (max(conf, s.confidence), st, ot)
        else:
            triples[key] = (s.confidence, s.subject_type, s.object_type)

    best: dict[tuple[str, str], BfEdge] = {}
    for (subject, predicate, obj), (conf, stype, otype) in sorted(triples.items()):
        tfidf = (safe_tfidf(subject) + safe_tfidf(obj)) * SPECIFICITY.get(
            taxonomy.level(predicate), 0.25)
        score = conf * min(safe_cov(subject), safe_cov(obj)) * tfidf
        edge = BfEdge(subject, stype, predicate, obj, otype, score)
        key = edge.pair
        incumbent = best.get(key)
        if incumbent is None or (-edge.score, edge.predicate, edge.subject) < (
                -incumbent.score, incumbent.predicate, incumbent.subject):
            best[key] = edge
    return best


def bf_cross_pairs(doc: Document) -> set[tuple[str, str]]:
    return {pair_of(s.subject, s.object) for s in doc.statements
            if s.subject_type != s.object_type and s.subject != s.object}


def bf_all_pairs(doc: Document) -> set[tuple[str, str]]:
    return {pair_of(s.subject, s.object) for s in doc.statements
            if s.subject != s.object}


# --------------------------------------------------------------------------
# first stages (full corpus scan instead of posting lists)
# --------------------------------------------------------------------------

def _candidates(docs, input_id, universe):
    allowed = set(docs) if universe is None else set(universe) & set(docs)
    allowed.discard(input_id)
    return allowed


def bf_first_stage(docs: dict[int, Document], input_id: int, strategy: str,
                   df: dict[str, int], taxonomy: PredicateTaxonomy,
                   blocked: frozenset[str] = frozenset(),
                   universe=None) -> dict[int, float]:
    n = len(docs)
    doc = docs[input_id]
    allowed = _candidates(docs, input_id, universe)
    scores: dict[int, float] = {}

    if strategy == "core":
        core = bf_core(doc, df, n, taxonomy)
        for pair in sorted(core):
            edge = core[pair]
            if edge.subject in blocked or edge.object in blocked:
                continue
            for other_id in allowed:
                if pair in bf_all_pairs(docs[other_id]):
                    scores[other_id] = scores.get(other_id, 0.0) + edge.score
        return scores

    # annotation-driven stages share their weighting; they differ only in
    # what counts as a match in the candidate document
    seen: list[str] = []
    for c in doc.concepts:
        if c.concept not in seen:
            seen.append(c.concept)
    for concept in seen:
        if concept in blocked:
            continue
        weight = bf_node_score(doc, df, n, concept)
        for other_id in allowed:
            other = docs[other_id]
            annotated = any(c.concept == concept for c in other.concepts)
            if strategy == "concept":
                hit = annotated
            elif strategy == "node":
                endpoint = any(concept in (s.subject, s.object) for s in other.statements)
                hit = annotated and endpoint
            else:
                raise ValueError(strategy)
            if hit:
                scores[other_id] = scores.get(other_id, 0.0) + weight
    return scores


def bf_cutoff(scores: dict[int, float], k: int, mode: str) -> list[tuple[int, float]]:
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(scores.items(), key=lambda item: (-item[1], -item[0]))
    if mode == "hard" or len(ranked) <= k:
        return ranked[:k]
    plateau = ranked[k - 1][1]
    cut = k
    while cut < min(len(ranked), 2 * k) and ranked[cut][1] == plateau:
        cut += 1
    return ranked[:cut]


# --------------------------------------------------------------------------
# text scoring (Okapi BM25 over the tokenized title+abstract)
# --------------------------------------------------------------------------

def bf_bm25_scores(docs: dict[int, Document], query_tokens: list[str],
                   candidate_ids, stemming: bool = False) -> dict[int, float]:
    token_lists = {doc_id: tokenize(doc.text, stemming=stemming)
                   for doc_id, doc in docs.items()}
    n = len(docs)
    if n == 0:
        return {doc_id: 0.0 for doc_id in candidate_ids}
    avg_len = sum(len(t) for t in token_lists.values()) / n
    term_df = Counter()
    for tokens in token_lists.values():
        term_df.update(set(tokens))

    counts = Counter(query_tokens)
    ordered_terms: list[str] = []
    for token in query_tokens:
        if token not in ordered_terms:
            ordered_terms.append(token)

    scores: dict[int, float] = {}
    for doc_id in candidate_ids:
        tokens = token_lists[doc_id]
        doc_counts = Counter(tokens)
        denominator_base = K1 * (1 - B + B * len(tokens) / avg_len) if avg_len else K1
        score = 0.0
        for term in ordered_terms:
            tf = doc_counts.get(term, 0)
            if tf == 0:
                continue
            idf = math.log(1 + (n - term_df[term] + 0.5) / (term_df[term] + 0.5))
            score += counts[term] * idf * tf * (K1 + 1) / (tf + denominator_base)
        scores[doc_id] = score
    return scores


# --------------------------------------------------------------------------
# end-to-end recommendation (candidate scan, overlap, normalization, fusion)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BfCandidate:
    doc_id: int
    core_overlap_raw: float
    bm25_raw: float
    core_overlap_norm: float
    bm25_norm: float
    fused: float


def bf_recommend(docs: dict[int, Document], input_id: int, taxonomy: PredicateTaxonomy,
                 *, strategy: str = "concept", k: int = 1000, cutoff: str = "flexible",
                 w_graph: float = 0.6, w_text: float = 0.4, top_n: int | None = 100,
                 blocked: frozenset[str] = frozenset(), universe=None,
                 stemming: bool = False) -> list[BfCandidate]:
    df = bf_df(docs)
    n = len(docs)
    first = bf_cutoff(
        bf_first_stage(docs, input_id, strategy, df, taxonomy, blocked, universe),
        k, cutoff)
    candidate_ids = [doc_id for doc_id, _ in first]

    core = bf_core(docs[input_id], df, n, taxonomy)
    overlaps = []
    for doc_id in candidate_ids:
        shared = set(core) & bf_cross_pairs(docs[doc_id])
        overlaps.append(sum(core[pair].score for pair in sorted(shared)))

    query = tokenize(docs[input_id].text, stemming=stemming)
    bm25 = bf_bm25_scores(docs, query, candidate_ids, stemming=stemming)
    bm25_raw = [bm25[doc_id] for doc_id in candidate_ids]

    def norm(values: list[float]) -> list[float]:
        peak = max(values, default=0.0)
        if peak <= 0.0:
            return [0.0] * len(values)
        return [v / peak for v in values]

    overlap_norm = norm(overlaps)
    text_norm = norm(bm25_raw)
    out = [BfCandidate(doc_id, overlaps[i], bm25_raw[i], overlap_norm[i], text_norm[i],
                       w_graph * overlap_norm[i] + w_text * text_norm[i])
           for i, doc_id in enumerate(candidate_ids)]
    if core:
        out.sort(key=lambda c: (-c.fused, -c.doc_id))
    return out if top_n is None else out[:top_n]


# --------------------------------------------------------------------------
# explanation (bounded shared / candidate-only edge listing)
# --------------------------------------------------------------------------

def bf_explain(docs: dict[int, Document], input_id: int, candidate_id: int,
               taxonomy: PredicateTaxonomy, budget: int = 6):
    """Return [(subject, predicate, object, status, score)] in output order."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    df = bf_df(docs)
    n = len(docs)
    input_core = bf_core(docs[input_id], df, n, taxonomy)
    candidate_core = bf_core(docs[candidate_id], df, n, taxonomy)

    def ordered(edges):
        return sorted(edges, key=lambda e: (-e.score, e.subject, e.object))

    out = []
    shared_pairs = set(input_core) & set(candidate_core)
    for edge in ordered([input_core[p] for p in shared_pairs]):
        if len(out) >= budget:
            break
        out.append((edge.subject, edge.predicate, edge.object, "Shared", edge.score))

    input_nodes = {node for pair in input_core for node in pair}
    candidate_only = [candidate_core[p] for p in set(candidate_core) - set(input_core)]
    for edge in ordered(candidate_only):
        if len(out) >= 2 * budget:
            break
        subject_known = edge.subject in input_nodes
        object_known = edge.object in input_nodes
        if subject_known and object_known:
            status = "EdgeOnlyNotShared"
        elif subject_known:
            status = "ObjectNotShared"
        elif object_known:
            status = "SubjectNotShared"
        else:
            continue
        out.append((edge.subject, edge.predicate, edge.object, status, edge.score))
    return out
