"""Synthetic corpus generators for benchmarks, demos, and load tests.

Two generators, both fully deterministic for a given seed:

* build_benchmark — a ~2k-document corpus with planted topic clusters and
  TREC-style judgments.  Relevant documents come in two flavors per topic:
  graph-heavy ones that repeat the seed documents' statements but use
  alternate surface forms (weak text match), and text-heavy ones that reuse
  the seeds' words but carry off-topic statements (weak graph match).  This
  makes graph-only, text-only, and fused rankings genuinely different while
  the retrieved candidate set — and therefore recall — stays fixed.

* build_perf_corpus — a large flat corpus with a frequency-banded concept
  vocabulary (very frequent concepts that the generic filter should block,
  a mid band that forms large candidate pools, and a long rare tail) for
  latency measurements.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus, Document, PredicateTaxonomy, parse_record
from .evalkit import Qrels

_TYPES = ("Drug", "Disease", "Gene")


def _record(doc_id: int, words: list[tuple[str, tuple[str, str] | None]],
            title_count: int, statements: list[dict]) -> dict:
    """Assemble an interchange record from annotated words.

    Each word is (surface, annotation) with annotation = (concept, type) or
    None.  The first title_count words form the title; offsets are computed
    in the joint title+space+abstract coordinate system.
    """
    concepts = []
    cursor = 0
    for index, (surface, annotation) in enumerate(words):
        if annotation is not None:
            concept, concept_type = annotation
            concepts.append({"id": concept, "type": concept_type,
                             "start": cursor, "end": cursor + len(surface),
                             "mention": surface})
        cursor += len(surface) + 1  # single separating space
    title = " ".join(surface for surface, _ in words[:title_count])
    abstract = " ".join(surface for surface, _ in words[title_count:])
    return {"id": doc_id, "title": title, "abstract": abstract,
            "concepts": concepts, "statements": statements}


def _statement(subject: str, subject_type: str, predicate: str,
               obj: str, object_type: str, confidence: float) -> dict:
    return {"subject": subject, "subject_type": subject_type, "predicate": predicate,
            "object": obj, "object_type": object_type,
            "sentence": f"{subject} {predicate} {obj}", "confidence": round(confidence, 3)}


def _records_to_corpus(records: Iterable[dict], taxonomy: PredicateTaxonomy) -> Corpus:
    documents: dict[int, Document] = {}
    for record in records:
        doc = parse_record(json.dumps(record))
        documents[doc.doc_id] = doc
    return Corpus(documents, taxonomy)


def write_records(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False))
            handle.write("\n")


# --------------------------------------------------------------------------
# topic-cluster benchmark
# --------------------------------------------------------------------------

class _TopicPlan:
    """Concept vocabulary and canonical statement set for one planted topic."""

    def __init__(self, topic: int, rng: random.Random):
        self.topic = topic
        self.drugs = [f"T{topic}D{i}" for i in range(4)]
        self.diseases = [f"T{topic}S{i}" for i in range(4)]
        self.genes = [f"T{topic}G{i}" for i in range(4)]
        self.crossover = f"X{topic}"  # shared with the next topic's documents
        # Two surface forms per concept: index 0 for text-aligned documents,
        # index 1 for graph-aligned ones (tokenizes differently).
        self.surfaces = {}
        for concept in self.concepts():
            base = concept.lower()
            self.surfaces[concept] = (base, base + "x" + str(rng.randint(10, 99)))
        self.words = [f"t{topic}w{i}" for i in range(24)]
        self.canon = [
            (self.drugs[0], "Drug", "treats", self.diseases[0], "Disease"),
            (self.drugs[1], "Drug", "treats", self.diseases[1], "Disease"),
            (self.genes[0], "Gene", "associated", self.diseases[0], "Disease"),
            (self.genes[1], "Gene", "regulates", self.diseases[1], "Disease"),
            (self.drugs[0], "Drug", "inhibits", self.genes[0], "Gene"),
            (self.drugs[2], "Drug", "interacts", self.genes[2], "Gene"),
            (self.crossover, "Chemical", "interacts", self.diseases[0], "Disease"),
        ]

    def concepts(self) -> list[str]:
        return self.drugs + self.diseases + self.genes + [self.crossover]

    def type_of(self, concept: str) -> str:
        if concept in self.drugs:
            return "Drug"
        if concept in self.diseases:
            return "Disease"
        if concept in self.genes:
            return "Gene"
        return "Chemical"


def _topic_doc(rng: random.Random, doc_id: int, plan: _TopicPlan, *,
               surface_index: int, concept_share: float, word_share: float,
               canon_pairs: int, off_canon_pairs: int,
               background: Sequence[str]) -> dict:
    """One topical document with tunable graph and text alignment."""
    chosen = [c for c in plan.concepts() if rng.random() < concept_share]
    if len(chosen) < 3:
        chosen = rng.sample(plan.concepts(), 3)

    words: list[tuple[str, tuple[str, str] | None]] = []
    total_words = rng.randint(46, 64)
    title_count = rng.randint(5, 8)
    mention_slots: list[tuple[str, tuple[str, str]]] = []
    for concept in chosen:
        surface = plan.surfaces[concept][surface_index]
        annotation = (concept, plan.type_of(concept))
        mention_slots.append((surface, annotation))
        mention_slots.append((surface, annotation))  # twice: nonzero coverage
    # Filler must outnumber mention slots, or sampling insertion positions
    # below would silently drop annotations.
    filler_count = max(total_words - len(mention_slots), len(mention_slots) + 4)
    for _ in range(filler_count):
        pool = plan.words if rng.random() < word_share else background
        words.append((rng.choice(pool), None))
    # Spread mentions across the document so first/last offsets sit far apart.
    positions = sorted(rng.sample(range(len(words) + 1), min(len(mention_slots), len(words) + 1)))
    for offset, (position, slot) in enumerate(zip(positions, mention_slots)):
        words.insert(position + offset, slot)

    statements = []
    canon = rng.sample(plan.canon, min(canon_pairs, len(plan.canon)))
    for subject, subject_type, predicate, obj, object_type in canon:
        statements.append(_statement(subject, subject_type, predicate, obj, object_type,
                                     rng.uniform(0.7, 0.98)))
    canon_keys = {frozenset((s, o)) for s, _, _, o, _ in plan.canon}
    attempts = 0
    while off_canon_pairs > 0 and attempts < 40:
        attempts += 1
        subject = rng.choice(plan.drugs + plan.genes)
        obj = rng.choice(plan.diseases)
        if frozenset((subject, obj)) in canon_keys or subject == obj:
            continue
        statements.append(_statement(subject, plan.type_of(subject), "studied_in",
                                     obj, "Disease", rng.uniform(0.4, 0.8)))
        off_canon_pairs -= 1
    return _record(doc_id, words, title_count, statements)


def _background_doc(rng: random.Random, doc_id: int, concepts: Sequence[str],
                    vocabulary: Sequence[str]) -> dict:
    chosen = rng.sample(list(concepts), rng.randint(2, 4))
    words: list[tuple[str, tuple[str, str] | None]] = []
    for _ in range(rng.randint(30, 50)):
        words.append((rng.choice(list(vocabulary)), None))
    slots = []
    for concept in chosen:
        annotation = (concept, "Method" if concept.endswith("m") else "Species")
        slots.append((concept.lower(), annotation))
        if rng.random() < 0.5:
            slots.append((concept.lower(), annotation))
    positions = sorted(rng.sample(range(len(words) + 1), len(slots)))
    for offset, (position, slot) in enumerate(zip(positions, slots)):
        words.insert(position + offset, slot)
    statements = []
    if len(chosen) >= 2 and rng.random() < 0.6:
        a, b = chosen[0], chosen[1]
        type_a = "Method" if a.endswith("m") else "Species"
        type_b = "Method" if b.endswith("m") else "Species"
        if type_a != type_b:
            statements.append(_statement(a, type_a, "cooccurs_with", b, type_b,
                                         rng.uniform(0.3, 0.9)))
    return _record(doc_id, words, rng.randint(4, 7), statements)


def build_benchmark(seed: int = 7, topics: int = 8, total_docs: int = 2000,
                    taxonomy: PredicateTaxonomy | None = None) -> tuple[Corpus, Qrels]:
    """Planted-cluster corpus plus matching judgments."""
    rng = random.Random(seed)
    taxonomy = taxonomy or PredicateTaxonomy.default()
    plans = [_TopicPlan(t, rng) for t in range(1, topics + 1)]
    background_concepts = [f"BGC{i}{'m' if i % 2 else 's'}" for i in range(30)]
    background_words = [f"common{i}" for i in range(220)]

    doc_ids = list(range(1001, 1001 + total_docs))
    rng.shuffle(doc_ids)
    next_id = iter(doc_ids)

    records: list[dict] = []
    grades: dict[tuple[str, int], int] = {}
    for plan in plans:
        topic_label = f"topic{plan.topic}"
        neighbor = plans[plan.topic % len(plans)]  # next topic, wrapping

        def make(kind: str) -> dict:
            doc_id = next(next_id)
            if kind == "seed":
                record = _topic_doc(rng, doc_id, plan, surface_index=0, concept_share=0.8,
                                    word_share=0.7, canon_pairs=6, off_canon_pairs=0,
                                    background=background_words)
            elif kind == "graphy":
                record = _topic_doc(rng, doc_id, plan, surface_index=1, concept_share=0.7,
                                    word_share=0.15, canon_pairs=4, off_canon_pairs=0,
                                    background=background_words)
            elif kind == "texty":
                record = _topic_doc(rng, doc_id, plan, surface_index=0, concept_share=0.6,
                                    word_share=0.75, canon_pairs=0, off_canon_pairs=2,
                                    background=background_words)
            elif kind == "nearmiss":
                record = _topic_doc(rng, doc_id, plan, surface_index=0, concept_share=0.2,
                                    word_share=0.3, canon_pairs=0, off_canon_pairs=1,
                                    background=background_words)
            else:  # fringe: topical but left unjudged
                record = _topic_doc(rng, doc_id, plan, surface_index=rng.randint(0, 1),
                                    concept_share=0.35, word_share=0.4, canon_pairs=1,
                                    off_canon_pairs=1, background=background_words)
            return record

        for _ in range(5):
            records.append(make("seed"))
            grades[(topic_label, records[-1]["id"])] = 2
        for _ in range(4):
            records.append(make("graphy"))
            grades[(topic_label, records[-1]["id"])] = 1
        for _ in range(4):
            records.append(make("texty"))
            grades[(topic_label, records[-1]["id"])] = 1
        # One relevant document with no annotations at all: text-only kinship.
        # No first stage can reach it, so set recall stays below 1.0 by the
        # same amount whatever the fusion weights — a useful tell that recall
        # is a property of the candidate pool, not of the ranking.
        orphan_id = next(next_id)
        orphan_words: list[tuple[str, tuple[str, str] | None]] = [
            (rng.choice(plan.words if rng.random() < 0.7 else background_words), None)
            for _ in range(rng.randint(40, 55))]
        records.append(_record(orphan_id, orphan_words, rng.randint(5, 8), []))
        grades[(topic_label, orphan_id)] = 1
        for _ in range(6):
            records.append(make("nearmiss"))
            grades[(topic_label, records[-1]["id"])] = 0
        for _ in range(8):
            records.append(make("fringe"))
        # A few neighbor-topic documents mention this topic's crossover
        # concept, so some retrieved documents are judged only elsewhere.
        for _ in range(3):
            doc_id = next(next_id)
            record = _topic_doc(rng, doc_id, neighbor, surface_index=0, concept_share=0.5,
                                word_share=0.5, canon_pairs=2, off_canon_pairs=0,
                                background=background_words)
            surface = plan.surfaces[plan.crossover][0]
            record["abstract"] = record["abstract"] + " " + surface
            text = record["title"] + " " + record["abstract"]
            start = len(text) - len(surface)
            record["concepts"].append({"id": plan.crossover, "type": "Chemical",
                                       "start": start, "end": len(text),
                                       "mention": surface})
            records.append(record)
            grades[(f"topic{neighbor.topic}", doc_id)] = 1

    while len(records) < total_docs:
        records.append(_background_doc(rng, next(next_id), background_concepts,
                                       background_words))

    corpus = _records_to_corpus(records, taxonomy)
    return corpus, Qrels(grades)


# --------------------------------------------------------------------------
# large flat corpus for latency measurements
# --------------------------------------------------------------------------

def build_perf_records(seed: int = 11, total_docs: int = 100_000) -> Iterable[dict]:
    """Yield interchange records for a frequency-banded large corpus.

    Concept bands: 40 head concepts (expected df ≈ 6% of docs — above the
    generic-filter ratio, so first stages should skip them), 180 mid concepts
    (df ≈ 1.7% — large but unblocked candidate pools), and 5000 rare tail
    concepts.  Types rotate Drug/Disease/Gene by concept number so statements
    can always cross types.
    """
    rng = random.Random(seed)
    head = [f"H{i}" for i in range(40)]
    mid = [f"M{i}" for i in range(180)]
    tail = [f"R{i}" for i in range(5000)]
    vocabulary = [f"w{i}" for i in range(3000)]
    predicates = ("treats", "inhibits", "associated", "interacts", "regulates")

    def type_of(concept: str) -> str:
        return _TYPES[int(concept[1:]) % len(_TYPES)]

    for doc_id in range(1, total_docs + 1):
        chosen: list[str] = []
        for concept in head:
            if rng.random() < 0.06:
                chosen.append(concept)
        chosen.extend(rng.sample(mid, rng.randint(2, 4)))
        chosen.extend(rng.choices(tail, k=rng.randint(2, 3)))
        chosen = list(dict.fromkeys(chosen))

        words: list[tuple[str, tuple[str, str] | None]] = [
            (rng.choice(vocabulary), None) for _ in range(rng.randint(22, 30))]
        slots = []
        for concept in chosen:
            annotation = (concept, type_of(concept))
            slots.append((concept.lower(), annotation))
            if rng.random() < 0.6:
                slots.append((concept.lower(), annotation))
        positions = sorted(rng.sample(range(len(words) + 1), min(len(slots), len(words) + 1)))
        for offset, (position, slot) in enumerate(zip(positions, slots)):
            words.insert(position + offset, slot)

        statements = []
        cross = [(a, b) for i, a in enumerate(chosen) for b in chosen[i + 1:]
                 if type_of(a) != type_of(b)]
        rng.shuffle(cross)
        for subject, obj in cross[: rng.randint(1, 3)]:
            statements.append(_statement(subject, type_of(subject), rng.choice(predicates),
                                         obj, type_of(obj), rng.uniform(0.5, 0.95)))
        yield _record(doc_id, words, rng.randint(4, 6), statements)
