"""Benchmark harness: judgments, runs, rank metrics, and the seed-driver.

Metric conventions follow the standard shared-task evaluator: a document
with grade >= 1 counts as relevant for recall and precision; gains are
graded for nDCG; bpref only looks at judged documents, with each retrieved
relevant document scoring 1 when no judged non-relevant document precedes
it.  Unjudged documents gain nothing but are counted (top-20) because graph
retrieval tends to surface many of them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields
from math import log2
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .errors import FormatError, UnknownTopicError

log = logging.getLogger(__name__)

SEED_GRADE = 2


class Qrels:
    """(topic, doc) -> relevance grade in {0, 1, 2}."""

    def __init__(self, grades: Mapping[tuple[str, int], int]):
        self._grades = dict(grades)
        self._by_topic: dict[str, dict[int, int]] = {}
        for (topic, doc_id), grade in self._grades.items():
            if grade not in (0, 1, 2):
                raise ValueError(f"grade must be 0, 1 or 2, got {grade}")
            self._by_topic.setdefault(topic, {})[doc_id] = grade

    def topics(self) -> list[str]:
        return sorted(self._by_topic)

    def __contains__(self, topic: str) -> bool:
        return topic in self._by_topic

    def topic_grades(self, topic: str) -> dict[int, int]:
        try:
            return dict(self._by_topic[topic])
        except KeyError:
            raise UnknownTopicError(f"topic {topic!r} not in qrels") from None

    def doc_ids(self) -> frozenset[int]:
        return frozenset(doc_id for _, doc_id in self._grades)

    def __len__(self) -> int:
        return len(self._grades)


def load_qrels(path: str | Path) -> Qrels:
    """TREC qrels: "topic 0 doc_id grade", whitespace-separated."""
    grades: dict[tuple[str, int], int] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            parts = raw.split()
            if len(parts) != 4:
                raise FormatError("expected 'topic 0 doc_id grade'", line=line_no)
            topic, _, doc_text, grade_text = parts
            try:
                doc_id = int(doc_text)
                grade = int(grade_text)
            except ValueError:
                raise FormatError(f"doc_id and grade must be integers: {raw!r}",
                                  line=line_no) from None
            if grade not in (0, 1, 2):
                raise FormatError(f"grade must be 0, 1 or 2, got {grade}", line=line_no)
            key = (topic, doc_id)
            if key in grades and grades[key] != grade:
                raise FormatError(f"conflicting grades for topic {topic} doc {doc_id}",
                                  line=line_no)
            grades[key] = grade
    return Qrels(grades)


def save_qrels(qrels: Qrels, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for topic in qrels.topics():
            grades = qrels.topic_grades(topic)
            for doc_id in sorted(grades):
                handle.write(f"{topic} 0 {doc_id} {grades[doc_id]}\n")


class RunList:
    """topic -> ranked (doc_id, score) list, duplicate-free per topic."""

    def __init__(self, entries: Mapping[str, Sequence[tuple[int, float]]]):
        self._entries: dict[str, list[tuple[int, float]]] = {}
        for topic, ranked in entries.items():
            seen = set()
            for doc_id, _ in ranked:
                if doc_id in seen:
                    raise ValueError(f"duplicate doc {doc_id} in topic {topic}")
                seen.add(doc_id)
            self._entries[topic] = list(ranked)

    def topics(self) -> list[str]:
        return sorted(self._entries)

    def ranked(self, topic: str) -> list[tuple[int, float]]:
        try:
            return list(self._entries[topic])
        except KeyError:
            raise UnknownTopicError(f"topic {topic!r} not in run") from None

    def ranked_ids(self, topic: str) -> list[int]:
        return [doc_id for doc_id, _ in self.ranked(topic)]

    def __len__(self) -> int:
        return len(self._entries)


def load_run(path: str | Path) -> RunList:
    """TREC run rows "topic Q0 doc_id rank score tag", kept in file order."""
    entries: dict[str, list[tuple[int, float]]] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            parts = raw.split()
            if len(parts) != 6:
                raise FormatError("expected 'topic Q0 doc_id rank score tag'", line=line_no)
            topic, _, doc_text, _, score_text, _ = parts
            try:
                doc_id = int(doc_text)
                score = float(score_text)
            except ValueError:
                raise FormatError(f"doc_id/score not numeric: {raw!r}", line=line_no) from None
            entries.setdefault(topic, []).append((doc_id, score))
    return RunList(entries)


def save_run(run: RunList, path: str | Path, tag: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for topic in run.topics():
            for rank, (doc_id, score) in enumerate(run.ranked(topic), start=1):
                handle.write(f"{topic} Q0 {doc_id} {rank} {score!r} {tag}\n")


@dataclass(frozen=True)
class MetricRow:
    """One evaluation row; label is a topic id, seed id, or aggregate name."""

    label: str
    set_recall: float
    ndcg10: float
    ndcg20: float
    p10: float
    p20: float
    bpref: float
    unjudged20: float

    @staticmethod
    def metric_names() -> list[str]:
        return [f.name for f in fields(MetricRow) if f.name != "label"]


def _dcg(gains: Sequence[int], k: int) -> float:
    return sum(gain / log2(position + 1)
               for position, gain in enumerate(gains[:k], start=1))


def compute_metrics(ranked_ids: Sequence[int], grades: Mapping[int, int],
                    label: str = "") -> MetricRow:
    """All metrics for one ranked list against one topic's judgments."""
    relevant = {doc_id for doc_id, grade in grades.items() if grade >= 1}
    nonrelevant = {doc_id for doc_id, grade in grades.items() if grade == 0}
    total_relevant = len(relevant)
    if total_relevant == 0:
        raise ValueError("cannot evaluate against judgments with no relevant document")

    retrieved_relevant = sum(1 for doc_id in ranked_ids if doc_id in relevant)
    set_recall = retrieved_relevant / total_relevant

    def precision_at(k: int) -> float:
        return sum(1 for doc_id in ranked_ids[:k] if doc_id in relevant) / k

    gains = [grades.get(doc_id, 0) for doc_id in ranked_ids]
    ideal_gains = sorted(grades.values(), reverse=True)

    def ndcg_at(k: int) -> float:
        ideal = _dcg(ideal_gains, k)
        return _dcg(gains, k) / ideal if ideal > 0 else 0.0

    judged_nonrel = len(nonrelevant)
    nonrel_above = 0
    bpref_sum = 0.0
    for doc_id in ranked_ids:
        if doc_id in relevant:
            if nonrel_above == 0:
                bpref_sum += 1.0
            else:
                bpref_sum += 1.0 - (min(nonrel_above, total_relevant)
                                    / min(total_relevant, judged_nonrel))
        elif doc_id in nonrelevant:
            nonrel_above += 1
    bpref = bpref_sum / total_relevant

    unjudged20 = sum(1 for doc_id in ranked_ids[:20] if doc_id not in grades)

    return MetricRow(label=label, set_recall=set_recall,
                     ndcg10=ndcg_at(10), ndcg20=ndcg_at(20),
                     p10=precision_at(10), p20=precision_at(20),
                     bpref=bpref, unjudged20=float(unjudged20))


def evaluate_topic(run: RunList, qrels: Qrels, topic: str) -> MetricRow:
    if topic not in qrels:
        raise UnknownTopicError(f"topic {topic!r} not in qrels")
    return compute_metrics(run.ranked_ids(topic), qrels.topic_grades(topic), label=topic)


def average_rows(rows: Sequence[MetricRow], label: str) -> MetricRow:
    """Arithmetic mean of each metric; rows must be non-empty."""
    if not rows:
        raise ValueError("cannot average zero rows")
    count = len(rows)
    means = {name: sum(getattr(row, name) for row in rows) / count
             for name in MetricRow.metric_names()}
    return MetricRow(label=label, **means)


def pairwise_jaccard(run_a: RunList, run_b: RunList, k: int) -> float:
    """Mean top-k set overlap over the topics both runs cover."""
    topics = sorted(set(run_a.topics()) & set(run_b.topics()))
    if not topics:
        raise ValueError("runs share no topics")
    total = 0.0
    for topic in topics:
        top_a = set(run_a.ranked_ids(topic)[:k])
        top_b = set(run_b.ranked_ids(topic)[:k])
        union = top_a | top_b
        total += (len(top_a & top_b) / len(union)) if union else 1.0
    return total / len(topics)


@dataclass(frozen=True)
class BenchmarkReport:
    """Per-topic rows, their macro average, and the raw per-seed runs."""

    topic_rows: tuple[MetricRow, ...]
    macro: MetricRow
    runs: RunList


def benchmark_driver(qrels: Qrels,
                     recommend_fn: Callable[[int], Sequence[tuple[int, float]]],
                     seed_grade: int = SEED_GRADE) -> BenchmarkReport:
    """Seed-based protocol: every grade-`seed_grade` document queries its topic.

    For each seed the judgment for the seed itself is removed, the ranked
    list from recommend_fn is evaluated against the remaining judgments, and
    rows average seed->topic->macro.  Seeds whose removal leaves a topic with
    no relevant document are skipped (their metrics are undefined), as are
    topics with no usable seed.
    """
    topic_rows: list[MetricRow] = []
    runs: dict[str, list[tuple[int, float]]] = {}
    for topic in qrels.topics():
        grades = qrels.topic_grades(topic)
        seeds = sorted(doc_id for doc_id, grade in grades.items() if grade == seed_grade)
        seed_rows: list[MetricRow] = []
        for seed in seeds:
            remaining = {doc_id: grade for doc_id, grade in grades.items() if doc_id != seed}
            if not any(grade >= 1 for grade in remaining.values()):
                log.warning("topic %s: seed %d leaves no relevant document, skipped", topic, seed)
                continue
            ranked = list(recommend_fn(seed))
            runs[f"{topic}.{seed}"] = ranked
            seed_rows.append(compute_metrics([doc_id for doc_id, _ in ranked],
                                             remaining, label=f"{topic}.{seed}"))
        if not seed_rows:
            log.warning("topic %s: no usable seed documents, skipped", topic)
            continue
        topic_rows.append(average_rows(seed_rows, label=topic))
    if not topic_rows:
        raise ValueError("no topic produced any evaluable seed")
    macro = average_rows(topic_rows, label="all")
    return BenchmarkReport(topic_rows=tuple(topic_rows), macro=macro, runs=RunList(runs))
