"""Exception hierarchy shared across the package.

Two families matter for the CLI exit-code contract: ``DataError`` maps to
exit code 2 and ``MissingArtifact`` to exit code 3. Everything else is a
plain ``XchatError`` (treated as a data problem unless stated otherwise).
"""

from __future__ import annotations


class XchatError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class DataError(XchatError):
    """Malformed or unusable input data."""

    exit_code = 2


class MissingArtifact(XchatError):
    """A required built artifact (corpus, index, graph) is absent."""

    exit_code = 3


class MalformedLine(DataError):
    """A lexicon or manual-triple TSV line does not parse."""


class UnknownCharacterClass(DataError):
    """A token is neither alphanumeric nor recognizable punctuation."""


class EmptyFile(DataError):
    """An input file contains no usable content."""


class FileUnreadable(DataError):
    """An input file cannot be opened or decoded."""


class MalformedDialogue(DataError):
    """A dialogue JSON record does not match the expected shape."""


class MalformedRecord(DataError):
    """A persisted record or import payload does not parse."""


class UnknownDocId(DataError):
    """A document id is not present in the corpus or index."""


class EmptyCorpus(DataError):
    """An index build was attempted over zero documents."""


class UnknownEntity(DataError):
    """A graph lookup referenced an entity with no node."""


class SkippedIntransitive(XchatError):
    """Informational: a triple with an empty object is not graphed."""


class SnapshotMismatch(DataError):
    """Corpus, index, and graph identifiers do not belong together."""


class SnapshotMissing(MissingArtifact):
    """The data directory has no complete built snapshot."""


class IndexUnavailable(MissingArtifact):
    """A retrieval index is required but not built."""


class GeneratorUnavailable(XchatError):
    """The external generator endpoint failed or answered badly."""


class LookupUnavailable(XchatError):
    """An optional network lookup could not be completed."""


class PortInUse(XchatError):
    """The configured service port is already bound."""
