"""Entity-relation graph built from extracted triples.

Nodes are keyed by a canonical phrase (content lemmas of the surface
text), so "the animal shelter" and "at animal shelter" collapse into one
entity while each keeps its surface spellings. Edges are unique per
(subject, predicate, object) and accumulate provenance. Intransitive
triples are recorded as skipped, never graphed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import textpipe
from .errors import SkippedIntransitive, SnapshotMissing, UnknownEntity
from .triples import SV, Triple, TripleSet


@dataclass
class EntityNode:
    node_id: str
    canonical: str
    surfaces: list[str] = field(default_factory=list)
    roles: list[str] = field(default_factory=list)
    external_link: str | None = None
    external_verified: bool = False

    def to_record(self) -> dict:
        return {
            "node_id": self.node_id,
            "canonical": self.canonical,
            "surfaces": sorted(self.surfaces),
            "roles": sorted(self.roles),
            "external_link": self.external_link,
            "external_verified": self.external_verified,
        }


@dataclass
class RelationEdge:
    edge_id: str
    from_id: str
    to_id: str
    predicate: str
    method: str
    provenance: list[str] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "edge_id": self.edge_id,
            "from": self.from_id,
            "to": self.to_id,
            "predicate": self.predicate,
            "method": self.method,
            "provenance": list(self.provenance),
        }


class OntologyGraph:
    def __init__(self) -> None:
        self.nodes: dict[str, EntityNode] = {}
        self.edges: dict[str, RelationEdge] = {}
        self.by_canonical: dict[str, str] = {}
        self.out_edges: dict[str, list[str]] = {}
        self.in_edges: dict[str, list[str]] = {}
        self.skipped: list[dict] = []
        self.graph_id: str | None = None
        self.corpus_hash: str | None = None
        self.built_at: str | None = None
        self._edge_keys: dict[tuple[str, str, str], str] = {}

    def node_for(self, canonical: str) -> EntityNode:
        node_id = self.by_canonical.get(canonical)
        if node_id is None:
            raise UnknownEntity(f"no entity {canonical!r} in the graph")
        return self.nodes[node_id]

    def _upsert_node(self, surface: str, role: str) -> EntityNode:
        canonical = textpipe.canonical_phrase(surface)
        node_id = self.by_canonical.get(canonical)
        if node_id is None:
            node_id = f"n{len(self.nodes)}"
            node = EntityNode(node_id=node_id, canonical=canonical)
            self.nodes[node_id] = node
            self.by_canonical[canonical] = node_id
            self.out_edges[node_id] = []
            self.in_edges[node_id] = []
        node = self.nodes[node_id]
        if surface not in node.surfaces:
            node.surfaces.append(surface)
        if role not in node.roles:
            node.roles.append(role)
        return node

    def upsert_triple(self, triple: Triple) -> str:
        """Insert or merge one triple; returns the edge id.

        Raises SkippedIntransitive for empty-object triples, which have no
        object node to connect.
        """
        if triple.pattern == SV or not triple.object:
            raise SkippedIntransitive(
                f"{triple.as_text()} has no object [{triple.provenance}]")
        subject = self._upsert_node(triple.subject, "subject")
        obj = self._upsert_node(triple.object, "object")
        key = (subject.node_id, triple.predicate, obj.node_id)
        edge_id = self._edge_keys.get(key)
        if edge_id is None:
            edge_id = f"e{len(self.edges)}"
            edge = RelationEdge(edge_id=edge_id, from_id=subject.node_id,
                                to_id=obj.node_id, predicate=triple.predicate,
                                method=triple.method)
            self.edges[edge_id] = edge
            self._edge_keys[key] = edge_id
            self.out_edges[subject.node_id].append(edge_id)
            self.in_edges[obj.node_id].append(edge_id)
        edge = self.edges[edge_id]
        if triple.provenance and triple.provenance not in edge.provenance:
            edge.provenance.append(triple.provenance)
        return edge_id

    def out_degree(self, canonical: str) -> int:
        return len(self.out_edges.get(self.by_canonical.get(canonical, ""), []))

    def edge_triples(self) -> list[tuple[str, str, str, str]]:
        """(subject canonical, predicate, object canonical, edge_id) per edge."""
        return [
            (self.nodes[e.from_id].canonical, e.predicate,
             self.nodes[e.to_id].canonical, e.edge_id)
            for e in self.edges.values()
        ]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OntologyGraph):
            return NotImplemented
        mine = ([n.to_record() for n in self.nodes.values()],
                [e.to_record() for e in self.edges.values()])
        theirs = ([n.to_record() for n in other.nodes.values()],
                  [e.to_record() for e in other.edges.values()])
        return mine == theirs


def build_graph(auto: TripleSet | None = None,
                manual: list[Triple] | None = None,
                corpus_hash: str | None = None) -> OntologyGraph:
    """Graph all transitive triples, auto first, then curated ones."""
    graph = OntologyGraph()
    for triple in list(auto or []) + list(manual or []):
        try:
            graph.upsert_triple(triple)
        except SkippedIntransitive:
            graph.skipped.append(triple.to_record())
    for node in graph.nodes.values():
        node.external_link = link_external(node.canonical)
    graph.corpus_hash = corpus_hash
    graph.graph_id = "gph-" + _fingerprint(graph)[:12]
    graph.built_at = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return graph


def _fingerprint(graph: OntologyGraph) -> str:
    payload = json.dumps({
        "corpus_hash": graph.corpus_hash,
        "nodes": [n.to_record() for n in graph.nodes.values()],
        "edges": [e.to_record() for e in graph.edges.values()],
    }, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def link_external(canonical: str) -> str | None:
    """Candidate DBpedia resource URL for an entity, or None for phrases
    made only of function-ish words (pronouns and the like). The link is
    a guess by construction; nothing is fetched to verify it.
    """
    if not canonical:
        return None
    words = canonical.split()
    lexicon = textpipe.load_lexicon()
    if all(w in lexicon.closed_class for w in words):
        return None
    label = canonical.replace(" ", "_")
    label = label[0].upper() + label[1:]
    return f"http://dbpedia.org/resource/{label}"


def neighborhood(graph: OntologyGraph, entity: str, depth: int = 1) -> OntologyGraph:
    """Induced subgraph of nodes within `depth` hops of the entity,
    following edges in both directions. Node and edge ids are preserved.
    """
    if depth < 1 or depth > 3:
        raise ValueError("depth must be between 1 and 3")
    center = graph.node_for(entity)
    seen = {center.node_id}
    frontier = [center.node_id]
    for _ in range(depth):
        nxt = []
        for node_id in frontier:
            for edge_id in graph.out_edges[node_id]:
                other = graph.edges[edge_id].to_id
                if other not in seen:
                    seen.add(other)
                    nxt.append(other)
            for edge_id in graph.in_edges[node_id]:
                other = graph.edges[edge_id].from_id
                if other not in seen:
                    seen.add(other)
                    nxt.append(other)
        frontier = nxt
    sub = OntologyGraph()
    for node_id, node in graph.nodes.items():
        if node_id in seen:
            sub.nodes[node_id] = node
            sub.by_canonical[node.canonical] = node_id
            sub.out_edges[node_id] = []
            sub.in_edges[node_id] = []
    for edge_id, edge in graph.edges.items():
        if edge.from_id in seen and edge.to_id in seen:
            sub.edges[edge_id] = edge
            sub.out_edges[edge.from_id].append(edge_id)
            sub.in_edges[edge.to_id].append(edge_id)
            sub._edge_keys[(edge.from_id, edge.predicate, edge.to_id)] = edge_id
    sub.graph_id = graph.graph_id
    sub.corpus_hash = graph.corpus_hash
    return sub


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph(graph: OntologyGraph, format: str = "structured") -> str:
    """Serialize the graph: "structured" JSON or an "import-script" of
    one MERGE/MATCH statement per line for a property-graph database.
    """
    if format == "structured":
        return json.dumps(to_structured(graph), sort_keys=True,
                          ensure_ascii=False, indent=2) + "\n"
    if format == "import-script":
        lines = []
        for node in graph.nodes.values():
            props = [
                f"canonical: {_quote(node.canonical)}",
                f"surfaces: {_quote('|'.join(sorted(node.surfaces)))}",
                f"roles: {_quote(','.join(sorted(node.roles)))}",
            ]
            if node.external_link:
                props.append(f"link: {_quote(node.external_link)}")
            lines.append("MERGE (:Entity {" + ", ".join(props) + "});")
        for edge in graph.edges.values():
            src = graph.nodes[edge.from_id].canonical
            dst = graph.nodes[edge.to_id].canonical
            rel = ", ".join([
                f"predicate: {_quote(edge.predicate)}",
                f"method: {_quote(edge.method)}",
                f"provenance: {_quote(';'.join(edge.provenance))}",
            ])
            lines.append(
                f"MATCH (a:Entity {{canonical: {_quote(src)}}}), "
                f"(b:Entity {{canonical: {_quote(dst)}}}) "
                f"MERGE (a)-[:REL {{{rel}}}]->(b);")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {format!r}")


def to_structured(graph: OntologyGraph) -> dict:
    return {
        "nodes": [n.to_record() for n in graph.nodes.values()],
        "edges": [e.to_record() for e in graph.edges.values()],
    }


def import_structured(record: dict | str) -> OntologyGraph:
    """Rebuild a graph from its structured export; inverse of to_structured."""
    if isinstance(record, str):
        record = json.loads(record)
    graph = OntologyGraph()
    for nrec in record["nodes"]:
        node = EntityNode(
            node_id=nrec["node_id"], canonical=nrec["canonical"],
            surfaces=list(nrec.get("surfaces", [])),
            roles=list(nrec.get("roles", [])),
            external_link=nrec.get("external_link"),
            external_verified=bool(nrec.get("external_verified", False)))
        graph.nodes[node.node_id] = node
        graph.by_canonical[node.canonical] = node.node_id
        graph.out_edges[node.node_id] = []
        graph.in_edges[node.node_id] = []
    for erec in record["edges"]:
        edge = RelationEdge(
            edge_id=erec["edge_id"], from_id=erec["from"], to_id=erec["to"],
            predicate=erec["predicate"], method=erec.get("method", "auto"),
            provenance=list(erec.get("provenance", [])))
        graph.edges[edge.edge_id] = edge
        graph.out_edges[edge.from_id].append(edge.edge_id)
        graph.in_edges[edge.to_id].append(edge.edge_id)
        graph._edge_keys[(edge.from_id, edge.predicate, edge.to_id)] = edge.edge_id
    return graph


def save_graph(graph: OntologyGraph, data_dir: str | Path) -> None:
    root = Path(data_dir) / "graph"
    root.mkdir(parents=True, exist_ok=True)
    payload = {
        "graph_id": graph.graph_id,
        "corpus_hash": graph.corpus_hash,
        "built_at": graph.built_at,
        "skipped": graph.skipped,
        "graph": to_structured(graph),
    }
    (root / "graph.json").write_text(
        json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
        "utf-8")


def load_graph(data_dir: str | Path) -> OntologyGraph:
    path = Path(data_dir) / "graph" / "graph.json"
    if not path.is_file():
        raise SnapshotMissing(f"no graph at {path}; run `xchat graph build` first")
    payload = json.loads(path.read_text("utf-8"))
    graph = import_structured(payload["graph"])
    graph.graph_id = payload.get("graph_id")
    graph.corpus_hash = payload.get("corpus_hash")
    graph.built_at = payload.get("built_at")
    graph.skipped = payload.get("skipped", [])
    return graph
