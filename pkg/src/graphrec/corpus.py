"""Document data model and the newline-delimited interchange format.

A corpus file is UTF-8 text with one JSON record per line:

    {"id": 123, "title": "...", "abstract": "...",
     "concepts": [{"id": "C1", "type": "Drug", "start": 0, "end": 9, "mention": "Metformin"}],
     "statements": [{"subject": "C1", "subject_type": "Drug", "predicate": "treats",
                     "object": "C2", "object_type": "Disease", "sentence": "...",
                     "confidence": 0.87}]}

Annotation offsets are character offsets into the document text, which is
defined as ``title + " " + abstract`` (one joint coordinate system).
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping

from .errors import DuplicateIdError, FormatError, UnknownDocumentError

log = logging.getLogger(__name__)

ConceptId = str

#: Taxonomy level assigned to predicates that are not in the taxonomy file.
GENERIC_PREDICATE_LEVEL = 3

_ID_PREFIX = re.compile(r'^\{\s*"id"\s*:\s*(\d+)')


@dataclass(frozen=True)
class ConceptAnnotation:
    """One text span linked to a vocabulary concept."""

    concept: ConceptId
    concept_type: str
    start: int
    end: int
    mention: str


@dataclass(frozen=True)
class Statement:
    """A subject-predicate-object interaction extracted from one sentence."""

    subject: ConceptId
    subject_type: str
    predicate: str
    object: ConceptId
    object_type: str
    sentence: str
    confidence: float


@dataclass(frozen=True)
class Document:
    """One recommendable unit: text plus its concept and statement layers."""

    doc_id: int
    title: str
    abstract: str
    concepts: tuple[ConceptAnnotation, ...]
    statements: tuple[Statement, ...]

    @property
    def text(self) -> str:
        """Title and abstract joined by a single space."""
        return self.title + " " + self.abstract

    @property
    def text_length(self) -> int:
        return len(self.text)


class PredicateTaxonomy:
    """Three-level predicate hierarchy.

    Level 1 holds the most specific predicates (e.g. "treats"), level 3 the
    most generic (e.g. "associated").  Predicates missing from the taxonomy
    fall to level 3.
    """

    def __init__(self, levels: Mapping[str, int] | None = None):
        self._levels: dict[str, int] = dict(levels or {})
        for predicate, level in self._levels.items():
            if level not in (1, 2, 3):
                raise ValueError(f"taxonomy level for {predicate!r} must be 1, 2 or 3")

    def level(self, predicate: str) -> int:
        return self._levels.get(predicate, GENERIC_PREDICATE_LEVEL)

    def __len__(self) -> int:
        return len(self._levels)

    def items(self):
        return self._levels.items()

    def __eq__(self, other) -> bool:
        return isinstance(other, PredicateTaxonomy) and self._levels == other._levels

    @classmethod
    def default(cls) -> "PredicateTaxonomy":
        """Bundled general-purpose biomedical taxonomy."""
        text = resources.files("graphrec.data").joinpath("predicate_taxonomy.tsv").read_text("utf-8")
        return _parse_taxonomy(text.splitlines())


@dataclass
class Corpus:
    """Immutable-after-load collection of documents plus the predicate taxonomy."""

    documents: dict[int, Document]
    taxonomy: PredicateTaxonomy = field(default_factory=PredicateTaxonomy)

    def __len__(self) -> int:
        return len(self.documents)

    def __contains__(self, doc_id: int) -> bool:
        return doc_id in self.documents

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents.values())

    def doc_ids(self) -> list[int]:
        return list(self.documents.keys())

    def get(self, doc_id: int) -> Document:
        try:
            return self.documents[doc_id]
        except KeyError:
            raise UnknownDocumentError(f"document {doc_id} not in corpus") from None


def _require(condition: bool, message: str, line: int) -> None:
    if not condition:
        raise FormatError(message, line=line)


def _parse_annotation(obj, text: str, line: int) -> ConceptAnnotation:
    _require(isinstance(obj, dict), "concept annotation must be an object", line)
    concept = obj.get("id")
    _require(isinstance(concept, str) and concept != "", "concept 'id' must be a non-empty string", line)
    concept_type = obj.get("type")
    _require(isinstance(concept_type, str) and concept_type != "", "concept 'type' must be a non-empty string", line)
    start, end = obj.get("start"), obj.get("end")
    _require(isinstance(start, int) and not isinstance(start, bool) and start >= 0,
             "concept 'start' must be an integer >= 0", line)
    _require(isinstance(end, int) and not isinstance(end, bool) and end > start,
             "concept 'end' must be an integer > start", line)
    _require(end <= len(text), f"concept 'end' ({end}) exceeds text length ({len(text)})", line)
    mention = obj.get("mention")
    _require(isinstance(mention, str), "concept 'mention' must be a string", line)
    _require(mention == text[start:end],
             f"concept 'mention' ({mention!r}) does not match text span [{start},{end})", line)
    return ConceptAnnotation(concept, concept_type, start, end, mention)


def _parse_statement(obj, doc_id: int, line: int) -> Statement | None:
    """Parse one statement record; returns None for dropped self-loops."""
    _require(isinstance(obj, dict), "statement must be an object", line)
    subject = obj.get("subject")
    _require(isinstance(subject, str) and subject != "", "statement 'subject' must be a non-empty string", line)
    predicate = obj.get("predicate")
    _require(isinstance(predicate, str) and predicate != "", "statement 'predicate' must be a non-empty string", line)
    obj_id = obj.get("object")
    _require(isinstance(obj_id, str) and obj_id != "", "statement 'object' must be a non-empty string", line)
    subject_type = obj.get("subject_type", "")
    object_type = obj.get("object_type", "")
    _require(isinstance(subject_type, str), "statement 'subject_type' must be a string", line)
    _require(isinstance(object_type, str), "statement 'object_type' must be a string", line)
    sentence = obj.get("sentence", "")
    _require(isinstance(sentence, str), "statement 'sentence' must be a string", line)

    if subject == obj_id:
        log.warning("line %d: dropping self-loop statement (%s, %s, %s) in document %d",
                    line, subject, predicate, obj_id, doc_id)
        return None

    confidence = obj.get("confidence")
    if confidence is None:
        log.warning("line %d: statement (%s, %s, %s) has no confidence, defaulting to 1.0",
                    line, subject, predicate, obj_id)
        confidence = 1.0
    _require(isinstance(confidence, (int, float)) and not isinstance(confidence, bool),
             "statement 'confidence' must be a number", line)
    _require(0.0 <= confidence <= 1.0, f"statement 'confidence' ({confidence}) must be in [0, 1]", line)
    return Statement(subject, subject_type, predicate, obj_id, object_type, sentence, float(confidence))


def parse_record(raw: str, line: int = 0) -> Document:
    """Parse and validate a single interchange record."""
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", line=line) from exc
    _require(isinstance(obj, dict), "record must be a JSON object", line)

    doc_id = obj.get("id")
    _require(isinstance(doc_id, int) and not isinstance(doc_id, bool) and doc_id >= 0,
             "'id' must be an unsigned integer", line)
    title = obj.get("title", "")
    abstract = obj.get("abstract", "")
    _require(isinstance(title, str), "'title' must be a string", line)
    _require(isinstance(abstract, str), "'abstract' must be a string", line)
    text = title + " " + abstract

    concepts_raw = obj.get("concepts", [])
    _require(isinstance(concepts_raw, list), "'concepts' must be a list", line)
    concepts = tuple(_parse_annotation(c, text, line) for c in concepts_raw)

    statements_raw = obj.get("statements", [])
    _require(isinstance(statements_raw, list), "'statements' must be a list", line)
    statements = tuple(s for s in (_parse_statement(s, doc_id, line) for s in statements_raw) if s is not None)

    return Document(doc_id, title, abstract, concepts, statements)


def load_corpus(path: str | Path, taxonomy: PredicateTaxonomy | None = None) -> Corpus:
    """Load and validate a corpus interchange file.

    Raises FormatError on the first malformed record (with its line number)
    and DuplicateIdError when two records share an id.  Blank lines are
    skipped.  An empty file is an error.
    """
    documents: dict[int, Document] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw:
                continue
            doc = parse_record(raw, line=line_no)
            if doc.doc_id in documents:
                raise DuplicateIdError(f"line {line_no}: duplicate document id {doc.doc_id}")
            documents[doc.doc_id] = doc
    if not documents:
        raise FormatError(f"no documents in {path}")
    return Corpus(documents, taxonomy or PredicateTaxonomy())


def document_to_record(doc: Document) -> dict:
    """Interchange-format dict for one document."""
    return {
        "id": doc.doc_id,
        "title": doc.title,
        "abstract": doc.abstract,
        "concepts": [
            {"id": a.concept, "type": a.concept_type, "start": a.start, "end": a.end, "mention": a.mention}
            for a in doc.concepts
        ],
        "statements": [
            {"subject": s.subject, "subject_type": s.subject_type, "predicate": s.predicate,
             "object": s.object, "object_type": s.object_type, "sentence": s.sentence,
             "confidence": s.confidence}
            for s in doc.statements
        ],
    }


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to the interchange format, one record per line."""
    with open(path, "w", encoding="utf-8") as handle:
        for doc in corpus:
            handle.write(json.dumps(document_to_record(doc), ensure_ascii=False))
            handle.write("\n")


def _parse_taxonomy(lines, source: str = "<taxonomy>") -> PredicateTaxonomy:
    levels: dict[str, int] = {}
    for line_no, raw in enumerate(lines, start=1):
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 2:
            raise FormatError(f"{source}: expected '<predicate><TAB><level>'", line=line_no)
        predicate, level_text = parts[0].strip(), parts[1].strip()
        if not predicate:
            raise FormatError(f"{source}: empty predicate", line=line_no)
        if level_text not in ("1", "2", "3"):
            raise FormatError(f"{source}: level must be 1, 2 or 3, got {level_text!r}", line=line_no)
        levels[predicate] = int(level_text)
    return PredicateTaxonomy(levels)


def load_taxonomy(path: str | Path) -> PredicateTaxonomy:
    """Load a predicate taxonomy file: one "<predicate><TAB><level>" per line."""
    with open(path, "r", encoding="utf-8") as handle:
        return _parse_taxonomy(handle, source=str(path))


def save_taxonomy(taxonomy: PredicateTaxonomy, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for predicate, level in sorted(taxonomy.items()):
            handle.write(f"{predicate}\t{level}\n")


class DocumentStore:
    """Lazy random access to documents in an interchange file.

    On open, a single byte-offset scan records where each record starts; the
    records themselves are parsed on first access and cached.  This keeps the
    serving path from holding every abstract and annotation in memory when
    only a handful of documents are ever inspected.
    """

    def __init__(self, path: str | Path, taxonomy: PredicateTaxonomy | None = None):
        self.path = Path(path)
        self.taxonomy = taxonomy or PredicateTaxonomy()
        self._offsets: dict[int, tuple[int, int]] = {}
        self._cache: dict[int, Document] = {}
        self._scan()

    def _scan(self) -> None:
        offset = 0
        with open(self.path, "rb") as handle:
            for line_no, raw in enumerate(handle, start=1):
                stripped = raw.strip()
                if stripped:
                    # Cheap id sniff: every well-formed record starts with its id.
                    head = stripped[:64].decode("utf-8", errors="replace")
                    match = _ID_PREFIX.match(head)
                    if match is None:
                        obj = json.loads(stripped)
                        doc_id = obj.get("id")
                        if not isinstance(doc_id, int) or isinstance(doc_id, bool):
                            raise FormatError("'id' must be an unsigned integer", line=line_no)
                    else:
                        doc_id = int(match.group(1))
                    if doc_id in self._offsets:
                        raise DuplicateIdError(f"line {line_no}: duplicate document id {doc_id}")
                    self._offsets[doc_id] = (offset, line_no)
                offset += len(raw)
        if not self._offsets:
            raise FormatError(f"no documents in {self.path}")

    def __len__(self) -> int:
        return len(self._offsets)

    def __contains__(self, doc_id: int) -> bool:
        return doc_id in self._offsets

    def doc_ids(self) -> list[int]:
        return list(self._offsets.keys())

    def get(self, doc_id: int) -> Document:
        if doc_id in self._cache:
            return self._cache[doc_id]
        if doc_id not in self._offsets:
            raise UnknownDocumentError(f"document {doc_id} not in corpus")
        offset, line_no = self._offsets[doc_id]
        with open(self.path, "rb") as handle:
            handle.seek(offset)
            raw = handle.readline().decode("utf-8")
        doc = parse_record(raw.strip(), line=line_no)
        if doc.doc_id != doc_id:
            raise FormatError(f"record at line {line_no} parsed as id {doc.doc_id}, expected {doc_id}",
                              line=line_no)
        self._cache[doc_id] = doc
        return doc


def load_filter_file(path: str | Path) -> frozenset[int]:
    """Load a benchmark document filter: one doc_id per line."""
    ids = set()
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            try:
                ids.add(int(raw))
            except ValueError:
                raise FormatError(f"filter entry must be an integer doc id, got {raw!r}", line=line_no) from None
    return frozenset(ids)
