/** Response shapes of the chat service HTTP API, mirroring schemas/. */

export interface SessionCreated {
  session_id: string;
}

export interface MessageResponse {
  response: string;
  response_id: string;
}

/** [term, contribution]; contributions sum to the hit's score. */
export type MatchedTerm = [string, number];

export interface RankedHit {
  doc_id: string;
  score: number;
  matched_terms: MatchedTerm[];
}

export type TriplePattern = "SVO" | "SVOO" | "SVOC" | "SV" | "SVP";

export interface Triple {
  subject: string;
  predicate: string;
  object: string;
  pattern: TriplePattern;
  method: "auto" | "manual";
  provenance: string;
}

export interface GraphTripleRef {
  subject: string;
  predicate: string;
  object: string;
  edge_id: string;
}

export interface TripleMatch {
  response_triple: Triple;
  graph_triple: GraphTripleRef;
  score: number;
  slot_scores: [number, number, number];
  scope: "restricted" | "global";
}

export interface ExplanationReport {
  response_id: string;
  response_text: string;
  query_text: string;
  provenance: RankedHit[];
  alignments: TripleMatch[];
  unmatched: Triple[];
  generator: string | null;
  generated_at: string;
}

export type NodeRole = "subject" | "object";

export interface GraphNode {
  node_id: string;
  canonical: string;
  surfaces: string[];
  roles: NodeRole[];
  external_link: string | null;
  external_verified: boolean;
}

export interface GraphEdge {
  edge_id: string;
  from: string;
  to: string;
  predicate: string;
  method: "auto" | "manual";
  provenance: string[];
}

export interface GraphExport {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface GraphNeighborhood extends GraphExport {
  center: string;
}

export interface HealthInfo {
  status: "ok";
  snapshot: {
    corpus_hash: string;
    index_id: string;
    graph_id: string;
    built_at: string;
  };
}

export interface DocumentRecord {
  doc_id: string;
  text: string;
  topics: string[];
  source: string;
  utterances: string[];
  persona: string[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
}

export type ConversationLevel = "l2" | "l3";
export type GeneratorKind = "retrieval" | "external";
export type NeighborhoodDepth = 1 | 2 | 3;
