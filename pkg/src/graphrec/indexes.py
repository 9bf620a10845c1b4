"""Inverted indexes over a corpus, with binary persistence.

Five structures are built together and saved to one directory:

* concept.idx — concept -> documents annotating it anywhere
* node.idx    — concept -> documents whose graph contains it as an
                (annotated) node
* edge.idx    — unordered concept pair -> documents with any statement
                connecting the pair
* df.idx      — corpus size plus per-concept document frequencies
* bm25.idx    — token postings, document token lengths, k1/b

plus a plain-text manifest.txt echoing the build configuration.  All binary
files are little-endian and carry a magic/version header.  The in-memory set
is immutable after build or load and safe for concurrent readers.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass
from math import log
from pathlib import Path
from typing import BinaryIO, Sequence

from .corpus import Corpus
from .errors import FormatError, UnknownDocumentError, VersionMismatchError
from .scoring import CorpusStats, PairKey, compute_stats, graph_nodes, graph_pairs
from .tokenizer import tokenize

MAGIC = b"GRIX"
FORMAT_VERSION = 1

MANIFEST_NAME = "manifest.txt"
INDEX_FILES = ("concept.idx", "node.idx", "edge.idx", "df.idx", "bm25.idx")


@dataclass(frozen=True)
class IndexConfig:
    """Build-time knobs; echoed in the manifest so load reproduces them."""

    k1: float = 1.2
    b: float = 0.75
    stemming: bool = False
    df_filter_ratio: float = 0.027
    df_filter_min_corpus: int = 1000
    force_df_filter: bool = False


class PostingIndex:
    """String key -> ascending, duplicate-free doc_id list."""

    def __init__(self, postings: dict[str, list[int]]):
        self._postings = postings

    def docs(self, key: str) -> Sequence[int]:
        return self._postings.get(key, ())

    def __contains__(self, key: str) -> bool:
        return key in self._postings

    def __len__(self) -> int:
        return len(self._postings)

    def keys(self) -> list[str]:
        return sorted(self._postings)


class PairIndex:
    """Unordered concept pair -> ascending, duplicate-free doc_id list."""

    def __init__(self, postings: dict[PairKey, list[int]]):
        self._postings = postings

    def docs(self, key: PairKey) -> Sequence[int]:
        return self._postings.get(key, ())

    def __contains__(self, key: PairKey) -> bool:
        return key in self._postings

    def __len__(self) -> int:
        return len(self._postings)

    def keys(self) -> list[PairKey]:
        return sorted(self._postings)


class Bm25Index:
    """Okapi BM25 over tokenized title+abstract text."""

    def __init__(self, postings: dict[str, dict[int, int]], doc_lengths: dict[int, int],
                 k1: float, b: float):
        if k1 <= 0:
            raise ValueError("k1 must be > 0")
        if not 0.0 <= b <= 1.0:
            raise ValueError("b must be in [0, 1]")
        self._postings = postings
        self._doc_lengths = doc_lengths
        self.k1 = k1
        self.b = b
        self.avg_length = (sum(doc_lengths.values()) / len(doc_lengths)) if doc_lengths else 0.0

    @property
    def corpus_size(self) -> int:
        return len(self._doc_lengths)

    def __contains__(self, doc_id: int) -> bool:
        return doc_id in self._doc_lengths

    def doc_length(self, doc_id: int) -> int:
        try:
            return self._doc_lengths[doc_id]
        except KeyError:
            raise UnknownDocumentError(f"document {doc_id} not in BM25 index") from None

    def term_df(self, term: str) -> int:
        return len(self._postings.get(term, ()))

    def term_frequency(self, term: str, doc_id: int) -> int:
        return self._postings.get(term, {}).get(doc_id, 0)

    def _denominator_base(self, doc_id: int) -> float:
        length_ratio = (self._doc_lengths[doc_id] / self.avg_length) if self.avg_length > 0 else 0.0
        return self.k1 * (1.0 - self.b + self.b * length_ratio)

    def score(self, query_tokens: Sequence[str], doc_id: int) -> float:
        """Okapi BM25 with multiset query semantics (repeated tokens add up)."""
        return self.batch_scores(query_tokens, (doc_id,))[doc_id]

    def batch_scores(self, query_tokens: Sequence[str], doc_ids: Sequence[int]) -> dict[int, float]:
        """Score many documents against one query in a single postings walk.

        Query terms are collapsed to (term, count) in first-appearance order;
        each occurrence of a term contributes the same amount, so the count
        multiplies.  The fixed term order keeps summation bit-reproducible.
        """
        for doc_id in doc_ids:
            if doc_id not in self._doc_lengths:
                raise UnknownDocumentError(f"document {doc_id} not in BM25 index")
        counts = Counter(query_tokens)
        n = self.corpus_size
        denominators = {doc_id: self._denominator_base(doc_id) for doc_id in doc_ids}
        scores = {doc_id: 0.0 for doc_id in doc_ids}
        for term, count in counts.items():
            postings = self._postings.get(term)
            if not postings:
                continue
            df = len(postings)
            weight = count * log(1.0 + (n - df + 0.5) / (df + 0.5)) * (self.k1 + 1.0)
            for doc_id in doc_ids:
                tf = postings.get(doc_id, 0)
                if tf:
                    scores[doc_id] += weight * tf / (tf + denominators[doc_id])
        return scores


@dataclass(frozen=True)
class GenericConceptFilter:
    """Concepts too frequent to discriminate; skipped by the first stages."""

    blocked: frozenset[str] = frozenset()

    def __contains__(self, concept: str) -> bool:
        return concept in self.blocked


def build_filter(stats: CorpusStats, config: IndexConfig) -> GenericConceptFilter:
    enabled = config.force_df_filter or stats.corpus_size >= config.df_filter_min_corpus
    if not enabled or stats.corpus_size == 0:
        return GenericConceptFilter()
    threshold = config.df_filter_ratio
    blocked = frozenset(c for c, df in stats.df.items()
                        if df / stats.corpus_size > threshold)
    return GenericConceptFilter(blocked)


@dataclass(frozen=True)
class IndexSet:
    """Everything the retrieval stages read; immutable after construction."""

    concepts: PostingIndex
    nodes: PostingIndex
    edges: PairIndex
    stats: CorpusStats
    bm25: Bm25Index
    generic_filter: GenericConceptFilter
    config: IndexConfig


def build_indexes(corpus: Corpus, config: IndexConfig | None = None) -> IndexSet:
    """Single pass over the corpus building all five structures."""
    config = config or IndexConfig()
    concept_postings: dict[str, list[int]] = {}
    node_postings: dict[str, list[int]] = {}
    edge_postings: dict[PairKey, list[int]] = {}
    bm25_postings: dict[str, dict[int, int]] = {}
    doc_lengths: dict[int, int] = {}

    for doc_id in sorted(corpus.documents):
        doc = corpus.documents[doc_id]
        for concept in sorted({a.concept for a in doc.concepts}):
            concept_postings.setdefault(concept, []).append(doc_id)
        for concept in sorted(graph_nodes(doc)):
            node_postings.setdefault(concept, []).append(doc_id)
        for pair in sorted(graph_pairs(doc)):
            edge_postings.setdefault(pair, []).append(doc_id)
        tokens = tokenize(doc.text, stemming=config.stemming)
        doc_lengths[doc_id] = len(tokens)
        counts: dict[str, int] = {}
        for token in tokens:
            counts[token] = counts.get(token, 0) + 1
        for token, count in counts.items():
            bm25_postings.setdefault(token, {})[doc_id] = count

    stats = compute_stats(corpus)
    return IndexSet(
        concepts=PostingIndex(concept_postings),
        nodes=PostingIndex(node_postings),
        edges=PairIndex(edge_postings),
        stats=stats,
        bm25=Bm25Index(bm25_postings, doc_lengths, config.k1, config.b),
        generic_filter=build_filter(stats, config),
        config=config,
    )


# --- persistence -----------------------------------------------------------

def _write_header(handle: BinaryIO) -> None:
    handle.write(MAGIC)
    handle.write(struct.pack("<I", FORMAT_VERSION))


def _read_header(handle: BinaryIO, path: Path) -> None:
    magic = handle.read(4)
    if magic != MAGIC:
        raise FormatError(f"{path}: not an index file (bad magic {magic!r})")
    (version,) = struct.unpack("<I", handle.read(4))
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{path}: format version {version}, this build reads version {FORMAT_VERSION}")


def _write_str(handle: BinaryIO, value: str) -> None:
    raw = value.encode("utf-8")
    handle.write(struct.pack("<I", len(raw)))
    handle.write(raw)


def _read_exact(handle: BinaryIO, size: int, path: Path) -> bytes:
    raw = handle.read(size)
    if len(raw) != size:
        raise FormatError(f"{path}: truncated index file")
    return raw


def _read_str(handle: BinaryIO, path: Path) -> str:
    (size,) = struct.unpack("<I", _read_exact(handle, 4, path))
    return _read_exact(handle, size, path).decode("utf-8")


def _write_doc_list(handle: BinaryIO, docs: list[int]) -> None:
    handle.write(struct.pack("<Q", len(docs)))
    handle.write(struct.pack(f"<{len(docs)}Q", *docs) if docs else b"")


def _read_doc_list(handle: BinaryIO, path: Path) -> list[int]:
    (count,) = struct.unpack("<Q", _read_exact(handle, 8, path))
    if count == 0:
        return []
    return list(struct.unpack(f"<{count}Q", _read_exact(handle, 8 * count, path)))


def _save_posting_index(index: PostingIndex, path: Path) -> None:
    with open(path, "wb") as handle:
        _write_header(handle)
        handle.write(struct.pack("<Q", len(index)))
        for key in index.keys():
            _write_str(handle, key)
            _write_doc_list(handle, list(index.docs(key)))


def _load_posting_index(path: Path) -> PostingIndex:
    postings: dict[str, list[int]] = {}
    with open(path, "rb") as handle:
        _read_header(handle, path)
        (count,) = struct.unpack("<Q", _read_exact(handle, 8, path))
        for _ in range(count):
            key = _read_str(handle, path)
            postings[key] = _read_doc_list(handle, path)
    return PostingIndex(postings)


def _save_pair_index(index: PairIndex, path: Path) -> None:
    with open(path, "wb") as handle:
        _write_header(handle)
        handle.write(struct.pack("<Q", len(index)))
        for a, b in index.keys():
            _write_str(handle, a)
            _write_str(handle, b)
            _write_doc_list(handle, list(index.docs((a, b))))


def _load_pair_index(path: Path) -> PairIndex:
    postings: dict[PairKey, list[int]] = {}
    with open(path, "rb") as handle:
        _read_header(handle, path)
        (count,) = struct.unpack("<Q", _read_exact(handle, 8, path))
        for _ in range(count):
            a = _read_str(handle, path)
            b = _read_str(handle, path)
            postings[(a, b)] = _read_doc_list(handle, path)
    return PairIndex(postings)


def _save_stats(stats: CorpusStats, path: Path) -> None:
    with open(path, "wb") as handle:
        _write_header(handle)
        handle.write(struct.pack("<Q", stats.corpus_size))
        handle.write(struct.pack("<Q", len(stats.df)))
        for concept in sorted(stats.df):
            _write_str(handle, concept)
            handle.write(struct.pack("<Q", stats.df[concept]))


def _load_stats(path: Path) -> CorpusStats:
    with open(path, "rb") as handle:
        _read_header(handle, path)
        (corpus_size,) = struct.unpack("<Q", _read_exact(handle, 8, path))
        (count,) = struct.unpack("<Q", _read_exact(handle, 8, path))
        df: dict[str, int] = {}
        for _ in range(count):
            concept = _read_str(handle, path)
            (value,) = struct.unpack("<Q", _read_exact(handle, 8, path))
            df[concept] = value
    return CorpusStats(corpus_size=corpus_size, df=df)


def _save_bm25(index: Bm25Index, path: Path) -> None:
    with open(path, "wb") as handle:
        _write_header(handle)
        handle.write(struct.pack("<dd", index.k1, index.b))
        lengths = index._doc_lengths
        handle.write(struct.pack("<Q", len(lengths)))
        for doc_id in sorted(lengths):
            handle.write(struct.pack("<QI", doc_id, lengths[doc_id]))
        postings = index._postings
        handle.write(struct.pack("<Q", len(postings)))
        for term in sorted(postings):
            _write_str(handle, term)
            term_docs = postings[term]
            handle.write(struct.pack("<Q", len(term_docs)))
            for doc_id in sorted(term_docs):
                handle.write(struct.pack("<QI", doc_id, term_docs[doc_id]))


def _load_bm25(path: Path) -> Bm25Index:
    with open(path, "rb") as handle:
        _read_header(handle, path)
        k1, b = struct.unpack("<dd", _read_exact(handle, 16, path))
        (doc_count,) = struct.unpack("<Q", _read_exact(handle, 8, path))
        doc_lengths: dict[int, int] = {}
        for _ in range(doc_count):
            doc_id, length = struct.unpack("<QI", _read_exact(handle, 12, path))
            doc_lengths[doc_id] = length
        (term_count,) = struct.unpack("<Q", _read_exact(handle, 8, path))
        postings: dict[str, dict[int, int]] = {}
        for _ in range(term_count):
            term = _read_str(handle, path)
            (posting_count,) = struct.unpack("<Q", _read_exact(handle, 8, path))
            term_docs: dict[int, int] = {}
            for _ in range(posting_count):
                doc_id, tf = struct.unpack("<QI", _read_exact(handle, 12, path))
                term_docs[doc_id] = tf
            postings[term] = term_docs
    return Bm25Index(postings, doc_lengths, k1, b)


def _format_float(value: float) -> str:
    return repr(value)


def _save_manifest(index_set: IndexSet, path: Path) -> None:
    config = index_set.config
    entries = {
        "format_version": str(FORMAT_VERSION),
        "corpus_size": str(index_set.stats.corpus_size),
        "k1": _format_float(config.k1),
        "b": _format_float(config.b),
        "stemming": "true" if config.stemming else "false",
        "df_filter_ratio": _format_float(config.df_filter_ratio),
        "df_filter_min_corpus": str(config.df_filter_min_corpus),
        "force_df_filter": "true" if config.force_df_filter else "false",
    }
    with open(path, "w", encoding="utf-8") as handle:
        for key in sorted(entries):
            handle.write(f"{key}={entries[key]}\n")


def _load_manifest(path: Path) -> IndexConfig:
    entries: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            if "=" not in raw:
                raise FormatError(f"{path}: expected key=value", line=line_no)
            key, _, value = raw.partition("=")
            entries[key.strip()] = value.strip()
    try:
        version = int(entries["format_version"])
    except (KeyError, ValueError):
        raise FormatError(f"{path}: missing or invalid format_version") from None
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{path}: format version {version}, this build reads version {FORMAT_VERSION}")
    try:
        return IndexConfig(
            k1=float(entries["k1"]),
            b=float(entries["b"]),
            stemming=entries["stemming"] == "true",
            df_filter_ratio=float(entries["df_filter_ratio"]),
            df_filter_min_corpus=int(entries["df_filter_min_corpus"]),
            force_df_filter=entries["force_df_filter"] == "true",
        )
    except KeyError as exc:
        raise FormatError(f"{path}: missing manifest key {exc.args[0]}") from None


def save_indexes(index_set: IndexSet, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    _save_manifest(index_set, directory / MANIFEST_NAME)
    _save_posting_index(index_set.concepts, directory / "concept.idx")
    _save_posting_index(index_set.nodes, directory / "node.idx")
    _save_pair_index(index_set.edges, directory / "edge.idx")
    _save_stats(index_set.stats, directory / "df.idx")
    _save_bm25(index_set.bm25, directory / "bm25.idx")


def load_indexes(directory: str | Path) -> IndexSet:
    """Rebuilds the in-memory set; the generic filter is recomputed from df."""
    directory = Path(directory)
    config = _load_manifest(directory / MANIFEST_NAME)
    stats = _load_stats(directory / "df.idx")
    return IndexSet(
        concepts=_load_posting_index(directory / "concept.idx"),
        nodes=_load_posting_index(directory / "node.idx"),
        edges=_load_pair_index(directory / "edge.idx"),
        stats=stats,
        bm25=_load_bm25(directory / "bm25.idx"),
        generic_filter=build_filter(stats, config),
        config=config,
    )
