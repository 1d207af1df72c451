"""Shared fixtures: packaged sample data and built data directories."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from xchat import corpus as corpus_mod
from xchat import graph as graph_mod
from xchat import tfidf
from xchat import triples as triples_mod

REPO_ROOT = Path(__file__).resolve().parent.parent
MANUAL_TSV = REPO_ROOT / "fixtures" / "manual_triples.tsv"


def packaged(name: str) -> str:
    return resources.files("xchat.fixtures").joinpath(name).read_text("utf-8")


@pytest.fixture(scope="session")
def sample_paragraph() -> str:
    return packaged("sample_paragraph.txt").strip()


@pytest.fixture(scope="session")
def golden_rows() -> list[tuple[str, str, str]]:
    rows = []
    for line in packaged("golden_triples.tsv").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        s, p, o = line.split("\t")[:3]
        rows.append((s, p, o))
    return rows


@pytest.fixture(scope="session")
def text_corpus(tmp_path_factory) -> corpus_mod.Corpus:
    """The sample paragraph ingested as one plain-text document."""
    tmp = tmp_path_factory.mktemp("textcorpus")
    path = tmp / "sample.txt"
    path.write_text(packaged("sample_paragraph.txt"), "utf-8")
    corpus = corpus_mod.Corpus()
    corpus_mod.ingest_text(corpus, path)
    return corpus


@pytest.fixture(scope="session")
def dialogue_corpus(tmp_path_factory) -> corpus_mod.Corpus:
    """The sample dialogue ingested with utterance boundaries kept."""
    tmp = tmp_path_factory.mktemp("dlgcorpus")
    path = tmp / "sample.json"
    path.write_text(packaged("sample_dialogue.json"), "utf-8")
    corpus = corpus_mod.Corpus()
    corpus_mod.ingest_dialogue_json(corpus, path, topic="animals")
    return corpus


@pytest.fixture(scope="session")
def text_graph(text_corpus) -> graph_mod.OntologyGraph:
    """Graph over the text corpus plus the curated triples."""
    auto = triples_mod.extract_corpus(text_corpus)
    manual = triples_mod.load_manual_triples(MANUAL_TSV)
    return graph_mod.build_graph(auto, manual,
                                 corpus_hash=text_corpus.content_hash())


@pytest.fixture(scope="session")
def built_data_dir(tmp_path_factory) -> Path:
    """A complete data directory over the dialogue fixture."""
    data_dir = tmp_path_factory.mktemp("data")
    tmp = tmp_path_factory.mktemp("dlgsrc")
    path = tmp / "sample.json"
    path.write_text(packaged("sample_dialogue.json"), "utf-8")
    corpus = corpus_mod.Corpus()
    corpus_mod.ingest_dialogue_json(corpus, path, topic="animals")
    corpus_mod.save_corpus(corpus, data_dir)
    index = tfidf.build_from_corpus(corpus)
    tfidf.save_index(index, data_dir)
    auto = triples_mod.extract_corpus(corpus)
    manual = triples_mod.load_manual_triples(MANUAL_TSV)
    graph = graph_mod.build_graph(auto, manual,
                                  corpus_hash=corpus.content_hash())
    graph_mod.save_graph(graph, data_dir)
    return data_dir
