"""Loading and describing a built data directory.

A complete data directory holds a corpus, a TF-IDF index, and a graph,
all derived from the same corpus content. The snapshot ties them together
and refuses to serve mismatched artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, load_corpus
from .errors import SnapshotMismatch, SnapshotMissing
from .graph import OntologyGraph, load_graph
from .tfidf import TfIdfIndex, load_index


@dataclass
class Snapshot:
    corpus_hash: str
    index_id: str
    graph_id: str
    built_at: str

    def to_record(self) -> dict:
        return {
            "corpus_hash": self.corpus_hash,
            "index_id": self.index_id,
            "graph_id": self.graph_id,
            "built_at": self.built_at,
        }


def load_snapshot(data_dir: str | Path) -> tuple[Corpus, TfIdfIndex, OntologyGraph, Snapshot]:
    """Load all three artifacts, checking they describe the same corpus."""
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise SnapshotMissing(f"data directory {data_dir} does not exist")
    corpus = load_corpus(data_dir)
    try:
        index = load_index(data_dir)
    except Exception as exc:
        raise SnapshotMissing(str(exc)) from exc
    graph = load_graph(data_dir)
    corpus_hash = corpus.content_hash()
    for name, artifact_hash in (("index", index.corpus_hash),
                                ("graph", graph.corpus_hash)):
        if artifact_hash and artifact_hash != corpus_hash:
            raise SnapshotMismatch(
                f"{name} was built over corpus {artifact_hash[:12]} but the "
                f"stored corpus hashes to {corpus_hash[:12]}; rebuild it")
    return corpus, index, graph, Snapshot(
        corpus_hash=corpus_hash,
        index_id=index.index_id or "",
        graph_id=graph.graph_id or "",
        built_at=max(filter(None, [index.built_at, graph.built_at]), default=""))
