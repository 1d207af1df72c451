"""TF-IDF document vectors with cosine ranking and matched-term audit.

Terms are lemmas with punctuation and stopwords removed. Weights are raw
term frequency times a smoothed inverse document frequency, L2-normalized
so cosine similarity reduces to a dot product. Rankings expose per-term
contributions so every score can be explained.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import textpipe
from .errors import EmptyCorpus, IndexUnavailable


@dataclass
class RankedHit:
    doc_id: str
    score: float
    matched_terms: list[tuple[str, float]] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "score": self.score,
            "matched_terms": [[t, c] for t, c in self.matched_terms],
        }

    @classmethod
    def from_record(cls, record: dict) -> "RankedHit":
        return cls(doc_id=record["doc_id"], score=record["score"],
                   matched_terms=[(t, c) for t, c in record["matched_terms"]])


@dataclass
class TfIdfIndex:
    n_docs: int = 0
    vocab: dict[str, int] = field(default_factory=dict)
    df: dict[int, int] = field(default_factory=dict)
    idf: dict[int, float] = field(default_factory=dict)
    tf: dict[str, dict[int, int]] = field(default_factory=dict)
    vectors: dict[str, dict[int, float]] = field(default_factory=dict)
    doc_ids: list[str] = field(default_factory=list)
    topics: dict[str, tuple[str, ...]] = field(default_factory=dict)
    corpus_hash: str | None = None
    index_id: str | None = None
    built_at: str | None = None
    _terms_by_id: dict[int, str] = field(default_factory=dict, repr=False)

    def term_of(self, term_id: int) -> str:
        if not self._terms_by_id:
            self._terms_by_id.update({i: t for t, i in self.vocab.items()})
        return self._terms_by_id[term_id]


def terms_of_sentences(sentences) -> list[str]:
    """Index terms of tagged sentences: lemmas minus punctuation and stopwords."""
    stop = textpipe.load_stopwords()
    out = []
    for sentence in sentences:
        for tok in sentence.tokens:
            if tok.pos == textpipe.PUNCT or tok.lemma in stop:
                continue
            out.append(tok.lemma)
    return out


def terms_of_text(text: str) -> list[str]:
    return terms_of_sentences(textpipe.analyze_text(text, None))


def build_index(term_lists: dict[str, list[str]],
                topics: dict[str, tuple[str, ...]] | None = None,
                corpus_hash: str | None = None) -> TfIdfIndex:
    """Build an index from ordered {doc_id: terms}. Term ids follow
    lexicographic term order; idf = ln((1+N)/(1+df)) + 1.
    """
    if not term_lists:
        raise EmptyCorpus("cannot build an index over zero documents")
    index = TfIdfIndex(n_docs=len(term_lists))
    index.doc_ids = list(term_lists)
    index.topics = dict(topics or {})
    index.corpus_hash = corpus_hash
    all_terms = sorted({t for terms in term_lists.values() for t in terms})
    index.vocab = {t: i for i, t in enumerate(all_terms)}
    for doc_id, terms in term_lists.items():
        counts: dict[int, int] = {}
        for term in terms:
            tid = index.vocab[term]
            counts[tid] = counts.get(tid, 0) + 1
        index.tf[doc_id] = counts
    for tid in range(len(all_terms)):
        index.df[tid] = sum(1 for counts in index.tf.values() if tid in counts)
        index.idf[tid] = math.log((1 + index.n_docs) / (1 + index.df[tid])) + 1.0
    for doc_id, counts in index.tf.items():
        index.vectors[doc_id] = _normalize(
            {tid: count * index.idf[tid] for tid, count in counts.items()})
    index.index_id = "idx-" + _fingerprint(index)[:12]
    index.built_at = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return index


def build_from_corpus(corpus) -> TfIdfIndex:
    term_lists = {doc.doc_id: terms_of_sentences(doc.sentences)
                  for doc in corpus.documents}
    topics = {doc.doc_id: doc.topics for doc in corpus.documents}
    return build_index(term_lists, topics=topics, corpus_hash=corpus.content_hash())


def _normalize(weights: dict[int, float]) -> dict[int, float]:
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm == 0.0:
        return {}
    return {tid: w / norm for tid, w in weights.items()}


def _fingerprint(index: TfIdfIndex) -> str:
    payload = json.dumps({
        "corpus_hash": index.corpus_hash,
        "doc_ids": index.doc_ids,
        "vocab": sorted(index.vocab),
    }, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def vectorize(text: str, index: TfIdfIndex) -> dict[int, float]:
    """Query vector over the index vocabulary; unseen terms drop out."""
    counts: dict[int, int] = {}
    for term in terms_of_text(text):
        tid = index.vocab.get(term)
        if tid is not None:
            counts[tid] = counts.get(tid, 0) + 1
    return _normalize({tid: c * index.idf[tid] for tid, c in counts.items()})


def top_k(query: str, k: int, index: TfIdfIndex,
          topic: str | None = None,
          candidates: list[str] | None = None) -> list[RankedHit]:
    """Top k documents by cosine, ties broken by ascending doc id.

    Zero-scoring documents are omitted; matched_terms carries each common
    term's contribution, and the contributions sum to the score.
    """
    qvec = vectorize(query, index)
    doc_ids = candidates if candidates is not None else index.doc_ids
    if topic is not None:
        doc_ids = [d for d in doc_ids if topic in index.topics.get(d, ())]
    scored: list[tuple[float, str, list[tuple[str, float]]]] = []
    for doc_id in doc_ids:
        dvec = index.vectors.get(doc_id, {})
        contributions = [
            (index.term_of(tid), weight * dvec[tid])
            for tid, weight in qvec.items() if tid in dvec
        ]
        score = sum(c for _, c in contributions)
        if score <= 0.0:
            continue
        contributions.sort(key=lambda item: (-item[1], item[0]))
        scored.append((score, doc_id, contributions))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [RankedHit(doc_id=d, score=s, matched_terms=m)
            for s, d, m in scored[:k]]


def save_index(index: TfIdfIndex, data_dir: str | Path) -> None:
    """Persist under <data_dir>/index: metadata, vocabulary, and raw term
    counts per document. Weights are recomputed on load.
    """
    root = Path(data_dir) / "index"
    root.mkdir(parents=True, exist_ok=True)
    meta = {
        "index_id": index.index_id,
        "corpus_hash": index.corpus_hash,
        "n_docs": index.n_docs,
        "doc_ids": index.doc_ids,
        "topics": {d: list(t) for d, t in index.topics.items()},
        "built_at": index.built_at,
    }
    (root / "meta.json").write_text(
        json.dumps(meta, sort_keys=True, ensure_ascii=False, indent=2) + "\n", "utf-8")
    vocab_lines = [f"{term}\t{tid}\t{index.df[tid]}"
                   for term, tid in sorted(index.vocab.items(), key=lambda kv: kv[1])]
    (root / "vocab.tsv").write_text("\n".join(vocab_lines) + "\n", "utf-8")
    with (root / "vectors.jsonl").open("w", encoding="utf-8") as fh:
        for doc_id in index.doc_ids:
            tf = {str(tid): c for tid, c in sorted(index.tf[doc_id].items())}
            fh.write(json.dumps({"doc_id": doc_id, "tf": tf}, sort_keys=True) + "\n")


def load_index(data_dir: str | Path) -> TfIdfIndex:
    root = Path(data_dir) / "index"
    meta_path = root / "meta.json"
    if not meta_path.is_file():
        raise IndexUnavailable(f"no index at {root}; run `xchat index build` first")
    meta = json.loads(meta_path.read_text("utf-8"))
    index = TfIdfIndex(n_docs=meta["n_docs"])
    index.doc_ids = meta["doc_ids"]
    index.topics = {d: tuple(t) for d, t in meta.get("topics", {}).items()}
    index.corpus_hash = meta.get("corpus_hash")
    index.index_id = meta.get("index_id")
    index.built_at = meta.get("built_at")
    for line in (root / "vocab.tsv").read_text("utf-8").splitlines():
        term, tid, df = line.split("\t")
        index.vocab[term] = int(tid)
        index.df[int(tid)] = int(df)
    for tid, df in index.df.items():
        index.idf[tid] = math.log((1 + index.n_docs) / (1 + df)) + 1.0
    for line in (root / "vectors.jsonl").read_text("utf-8").splitlines():
        record = json.loads(line)
        counts = {int(tid): c for tid, c in record["tf"].items()}
        index.tf[record["doc_id"]] = counts
        index.vectors[record["doc_id"]] = _normalize(
            {tid: c * index.idf[tid] for tid, c in counts.items()})
    return index
