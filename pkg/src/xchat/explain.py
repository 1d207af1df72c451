"""Explanation reports: align a response with the graph and the corpus.

Every bot response gets a report holding (a) the retrieval provenance of
the response against the training corpus and (b) an alignment of each
triple extracted from the response with its best-matching graph edge.
Slot similarity is lemma overlap, so "I am getting dog" still aligns with
"I 've been around dogs" even though no surface strings match.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import textpipe
from .errors import SnapshotMismatch
from .graph import OntologyGraph
from .tfidf import RankedHit, TfIdfIndex, top_k
from .triples import Triple, extract_triples

MATCH_THRESHOLD = 0.3
_SLOT_WEIGHTS = (0.3, 0.3, 0.4)


@dataclass
class TripleMatch:
    response_triple: Triple
    graph_subject: str
    graph_predicate: str
    graph_object: str
    edge_id: str
    score: float
    slot_scores: tuple[float, float, float]
    scope: str = "restricted"

    def graph_text(self) -> str:
        return f"({self.graph_subject}, {self.graph_predicate}, {self.graph_object})"

    def to_record(self) -> dict:
        return {
            "response_triple": self.response_triple.to_record(),
            "graph_triple": {
                "subject": self.graph_subject,
                "predicate": self.graph_predicate,
                "object": self.graph_object,
                "edge_id": self.edge_id,
            },
            "score": self.score,
            "slot_scores": list(self.slot_scores),
            "scope": self.scope,
        }

    @classmethod
    def from_record(cls, record: dict) -> "TripleMatch":
        gt = record["graph_triple"]
        return cls(
            response_triple=Triple.from_record(record["response_triple"]),
            graph_subject=gt["subject"], graph_predicate=gt["predicate"],
            graph_object=gt["object"], edge_id=gt["edge_id"],
            score=record["score"],
            slot_scores=tuple(record["slot_scores"]),
            scope=record.get("scope", "restricted"))


@dataclass
class ExplanationReport:
    response_id: str
    response_text: str
    query_text: str
    provenance: list[RankedHit] = field(default_factory=list)
    alignments: list[TripleMatch] = field(default_factory=list)
    unmatched: list[Triple] = field(default_factory=list)
    generator: str | None = None
    generated_at: str = ""

    def to_record(self) -> dict:
        return {
            "response_id": self.response_id,
            "response_text": self.response_text,
            "query_text": self.query_text,
            "provenance": [h.to_record() for h in self.provenance],
            "alignments": [m.to_record() for m in self.alignments],
            "unmatched": [t.to_record() for t in self.unmatched],
            "generator": self.generator,
            "generated_at": self.generated_at,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ExplanationReport":
        return cls(
            response_id=record["response_id"],
            response_text=record["response_text"],
            query_text=record["query_text"],
            provenance=[RankedHit.from_record(r) for r in record["provenance"]],
            alignments=[TripleMatch.from_record(r) for r in record["alignments"]],
            unmatched=[Triple.from_record(r) for r in record["unmatched"]],
            generator=record.get("generator"),
            generated_at=record.get("generated_at", ""))


def slot_lemmas(text: str) -> frozenset[str]:
    """Content lemmas of a slot's surface text, as a set."""
    return frozenset(textpipe.content_lemmas(text))


def slot_score(a: str, b: str) -> float:
    """Lemma-overlap similarity of two slot texts in [0, 1].

    Two empty slots agree perfectly; one empty slot cannot match.
    """
    la, lb = slot_lemmas(a), slot_lemmas(b)
    if not la and not lb:
        return 1.0
    if not la or not lb:
        return 0.0
    return len(la & lb) / max(len(la), len(lb))


def triple_match_score(response: Triple,
                       edge: tuple[str, str, str]) -> tuple[float, tuple[float, float, float]]:
    """Weighted slot similarity of a response triple against a graph edge
    given as (subject, predicate, object) canonical text.
    """
    slots = (
        slot_score(response.subject, edge[0]),
        slot_score(response.predicate, edge[1]),
        slot_score(response.object, edge[2]),
    )
    total = sum(w * s for w, s in zip(_SLOT_WEIGHTS, slots))
    return total, slots


def _best_match(response: Triple,
                edges: list[tuple[str, str, str, str]]) -> TripleMatch | None:
    best: TripleMatch | None = None
    for subject, predicate, obj, edge_id in edges:
        score, slots = triple_match_score(response, (subject, predicate, obj))
        if best is None or score > best.score:
            best = TripleMatch(
                response_triple=response, graph_subject=subject,
                graph_predicate=predicate, graph_object=obj, edge_id=edge_id,
                score=score, slot_scores=slots)
    return best


def explain(response_text: str, session_context: list[str], index: TfIdfIndex,
            graph: OntologyGraph, k: int = 3, response_id: str = "adhoc",
            generator: str | None = None, topic: str | None = None) -> ExplanationReport:
    """Build the report for one response.

    The retrieval query is the response followed by the last two user
    turns. Alignment first searches edges whose provenance lies in the
    retrieved documents (curated edges always qualify); a triple that
    scores under the threshold there retries against the whole graph, and
    one that still scores under the threshold is reported as unmatched.
    """
    if index.corpus_hash and graph.corpus_hash \
            and index.corpus_hash != graph.corpus_hash:
        raise SnapshotMismatch(
            f"index is over corpus {index.corpus_hash[:12]} but graph is over "
            f"{graph.corpus_hash[:12]}; rebuild one of them")
    query_text = " ".join([response_text] + list(session_context)[-2:])
    provenance = top_k(query_text, k, index, topic=topic)
    top_docs = {hit.doc_id for hit in provenance}

    all_edges = graph.edge_triples()
    restricted = [
        (s, p, o, eid) for s, p, o, eid in all_edges
        if any(prov.startswith("manual:")
               or prov.split(":", 1)[0] in top_docs
               for prov in graph.edges[eid].provenance)
    ]

    response_triples: list[Triple] = []
    for sentence in textpipe.analyze_text(response_text, "response"):
        response_triples.extend(extract_triples(sentence))

    alignments: list[TripleMatch] = []
    unmatched: list[Triple] = []
    for order, triple in enumerate(response_triples):
        match = _best_match(triple, restricted)
        if match is None or match.score < MATCH_THRESHOLD:
            fallback = _best_match(triple, all_edges)
            if fallback is not None and fallback.score >= MATCH_THRESHOLD:
                fallback.scope = "global"
                match = fallback
            else:
                unmatched.append(triple)
                continue
        alignments.append(match)
    order_of = {id(m): i for i, m in enumerate(alignments)}
    alignments.sort(key=lambda m: (-m.score, order_of[id(m)]))

    return ExplanationReport(
        response_id=response_id, response_text=response_text,
        query_text=query_text, provenance=provenance, alignments=alignments,
        unmatched=unmatched, generator=generator,
        generated_at=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"))


def render_report(report: ExplanationReport, format: str = "text") -> str:
    """Render a report as JSON ("structured") or a two-column table ("text")."""
    if format == "structured":
        return json.dumps(report.to_record(), sort_keys=True,
                          ensure_ascii=False, indent=2) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")
    lines = [
        f"response {report.response_id}: {report.response_text}",
        f"query: {report.query_text}",
        "",
    ]
    left_col = ["system generated"] + [m.response_triple.as_text() for m in report.alignments]
    right_col = ["training data triple"] + [m.graph_text() for m in report.alignments]
    width = max(len(s) for s in left_col)
    lines.append(f"{left_col[0]:<{width}}  {right_col[0]}  score")
    lines.append("-" * (width + 2 + len(right_col[0]) + 7))
    for i, match in enumerate(report.alignments, start=1):
        lines.append(f"{left_col[i]:<{width}}  {right_col[i]}  {match.score:.3f}")
    if not report.alignments:
        lines.append("(no aligned triples)")
    if report.unmatched:
        lines.append("")
        lines.append("unmatched:")
        for triple in report.unmatched:
            lines.append(f"  {triple.as_text()}")
    lines.append("")
    lines.append("provenance:")
    for hit in report.provenance:
        terms = ", ".join(f"{t}={c:.4f}" for t, c in hit.matched_terms[:5])
        lines.append(f"  {hit.doc_id}  score={hit.score:.4f}  [{terms}]")
    if not report.provenance:
        lines.append("  (no matching documents)")
    return "\n".join(lines) + "\n"
