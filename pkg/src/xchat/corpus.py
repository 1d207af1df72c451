"""Corpus ingestion and persistence.

A Document is one paragraph of training text; paragraphs are the unit of
TF-IDF retrieval and provenance. Plain-text files split into paragraphs
on blank lines; dialogue files flatten each dialogue's utterances into a
single paragraph and keep the utterance boundaries for the responder.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import textpipe
from .errors import (
    EmptyFile,
    FileUnreadable,
    MalformedRecord,
    SnapshotMissing,
    UnknownDocId,
)


@dataclass
class Document:
    doc_id: str
    text: str
    topics: tuple[str, ...] = ()
    source: str = ""
    utterances: tuple[str, ...] = ()
    persona: tuple[str, ...] = ()
    _sentences: tuple[textpipe.Sentence, ...] | None = field(
        default=None, repr=False, compare=False)

    @property
    def sentences(self) -> tuple[textpipe.Sentence, ...]:
        """Tagged sentences of the text, then of the persona lines."""
        if self._sentences is None:
            sents = list(textpipe.analyze_text(self.text, self.doc_id))
            offset = len(sents)
            for line in self.persona:
                for raw in textpipe.split_sentences(line):
                    sents.append(textpipe.analyze_sentence(raw, self.doc_id, offset))
                    offset += 1
            self._sentences = tuple(sents)
        return self._sentences

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "text": self.text,
            "topics": list(self.topics),
            "source": self.source,
            "utterances": list(self.utterances),
            "persona": list(self.persona),
        }

    @classmethod
    def from_record(cls, record: dict) -> "Document":
        return cls(
            doc_id=record["doc_id"],
            text=record["text"],
            topics=tuple(record.get("topics", [])),
            source=record.get("source", ""),
            utterances=tuple(record.get("utterances", [])),
            persona=tuple(record.get("persona", [])),
        )


class Corpus:
    """Ordered collection of documents with id lookup."""

    def __init__(self) -> None:
        self.documents: list[Document] = []
        self._by_id: dict[str, Document] = {}
        self.sources: list[dict] = []
        self.ingested_at: str = _utcnow()

    def add_document(self, text: str, source: str, topics: tuple[str, ...] = (),
                     utterances: tuple[str, ...] = (),
                     persona: tuple[str, ...] = ()) -> Document:
        doc_id = _doc_id(text, len(self.documents))
        doc = Document(doc_id=doc_id, text=text, topics=topics, source=source,
                       utterances=utterances or tuple(textpipe.split_sentences(text)),
                       persona=persona)
        self.documents.append(doc)
        self._by_id[doc_id] = doc
        return doc

    def get_document(self, doc_id: str) -> Document:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise UnknownDocId(f"no document with id {doc_id!r}") from None

    def list_documents(self, topic: str | None = None) -> list[str]:
        return [d.doc_id for d in self.documents
                if topic is None or topic in d.topics]

    def content_hash(self) -> str:
        payload = json.dumps([d.to_record() for d in self.documents],
                             sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _utcnow() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _doc_id(text: str, ordinal: int) -> str:
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()[:8]
    return f"{digest}-{ordinal:04d}"


def _normalize_paragraph(block: str) -> str:
    return " ".join(line.strip() for line in block.splitlines() if line.strip())


def _read_file(path: str | Path) -> str:
    try:
        return Path(path).read_text("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc


def ingest_text(corpus: Corpus, path: str | Path, topic: str | None = None) -> int:
    """Add one document per blank-line-separated paragraph of the file."""
    content = _read_file(path)
    paragraphs = [_normalize_paragraph(b) for b in content.split("\n\n")]
    paragraphs = [p for p in paragraphs if p]
    if not paragraphs:
        raise EmptyFile(f"{path}: no non-blank paragraphs")
    topics = (topic,) if topic else ()
    for i, para in enumerate(paragraphs):
        corpus.add_document(para, source=f"{path}#p{i}", topics=topics)
    corpus.sources.append({"path": str(path), "kind": "text", "documents": len(paragraphs)})
    return len(paragraphs)


def ingest_dialogue_json(corpus: Corpus, path: str | Path,
                         topic: str | None = None) -> int:
    """Flatten each dialogue record into one paragraph document.

    Expected file shape: a list of {"persona": [...], "utterances": [...]}.
    Utterances join space-separated into the document text; persona lines
    become additional sentences of the same document.
    """
    content = _read_file(path)
    try:
        records = json.loads(content)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"{path}: invalid structured file: {exc}") from exc
    if not isinstance(records, list):
        raise MalformedRecord(f"{path}: top level must be a list of dialogues")
    topics = (topic,) if topic else ()
    added = 0
    for i, rec in enumerate(records):
        if not isinstance(rec, dict) or not isinstance(rec.get("utterances"), list):
            raise MalformedRecord(f"{path}: record {i}: expected an object with an 'utterances' list")
        utterances = rec["utterances"]
        persona = rec.get("persona", [])
        if not all(isinstance(u, str) for u in utterances) \
                or not isinstance(persona, list) \
                or not all(isinstance(p, str) for p in persona):
            raise MalformedRecord(f"{path}: record {i}: utterances and persona must be lists of text")
        text = " ".join(u.strip() for u in utterances if u.strip())
        if not text:
            raise MalformedRecord(f"{path}: record {i}: no utterance text")
        corpus.add_document(text, source=f"{path}#d{i}", topics=topics,
                            utterances=tuple(u.strip() for u in utterances if u.strip()),
                            persona=tuple(p.strip() for p in persona if p.strip()))
        added += 1
    corpus.sources.append({"path": str(path), "kind": "dialogue", "documents": added})
    return added


def save_corpus(corpus: Corpus, data_dir: str | Path) -> None:
    """Persist under <data_dir>/corpus as a manifest plus one file per document."""
    root = Path(data_dir) / "corpus"
    docs_dir = root / "docs"
    docs_dir.mkdir(parents=True, exist_ok=True)
    for doc in corpus.documents:
        out = docs_dir / f"{doc.doc_id}.json"
        out.write_text(_dumps(doc.to_record()), "utf-8")
    manifest = {
        "version": 1,
        "ingested_at": corpus.ingested_at,
        "sources": corpus.sources,
        "document_ids": [d.doc_id for d in corpus.documents],
        "counts": {"documents": len(corpus.documents)},
        "corpus_hash": corpus.content_hash(),
    }
    (root / "manifest.json").write_text(_dumps(manifest), "utf-8")


def load_corpus(data_dir: str | Path) -> Corpus:
    root = Path(data_dir) / "corpus"
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise SnapshotMissing(f"no corpus at {root}; run `xchat ingest` first")
    manifest = json.loads(manifest_path.read_text("utf-8"))
    corpus = Corpus()
    corpus.sources = manifest.get("sources", [])
    corpus.ingested_at = manifest.get("ingested_at", corpus.ingested_at)
    for doc_id in manifest["document_ids"]:
        record = json.loads((root / "docs" / f"{doc_id}.json").read_text("utf-8"))
        doc = Document.from_record(record)
        corpus.documents.append(doc)
        corpus._by_id[doc.doc_id] = doc
    return corpus


def _dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
