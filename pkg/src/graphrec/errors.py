"""Exception types shared across the package."""


class GraphRecError(Exception):
    """Base class for all graphrec errors."""


class FormatError(GraphRecError, ValueError):
    """Malformed input file or record.

    ``line`` carries the 1-based line number of the offending record when
    the error originates from a line-oriented file.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateIdError(GraphRecError):
    """Two records in one corpus file share a document id."""


class ConceptAbsentError(GraphRecError):
    """A scoring operation was asked about a concept with no annotation."""


class NoSupportError(GraphRecError):
    """No statement in the document supports the requested edge."""


class UnknownDocumentError(GraphRecError, KeyError):
    """Document id not present in the corpus or index."""


class UnknownTopicError(GraphRecError, KeyError):
    """Topic id not present in the relevance judgments."""


class VersionMismatchError(GraphRecError):
    """Persisted index was written by an incompatible format version."""


class InvalidKError(GraphRecError, ValueError):
    """First-stage cutoff k must be at least 1."""


class InvalidLError(GraphRecError, ValueError):
    """Explanation length budget l must be at least 1."""
