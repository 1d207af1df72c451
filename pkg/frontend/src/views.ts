/** Pure HTML/SVG string renderers.
 *
 * Every renderer maps state to markup with no side effects and no API
 * calls, so the full page can be asserted on as a string. Interactive
 * elements carry data-action attributes; the browser entry point wires
 * them up with event delegation.
 */

import type { PlacedNode } from "./layout.js";
import type {
  DocumentRecord,
  ExplanationReport,
  GraphNeighborhood,
  NeighborhoodDepth,
  RankedHit,
  TripleMatch,
} from "./types.js";
import { selectedReport, type UiSessionState } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

const esc = escapeHtml;

// ---------------------------------------------------------------------------
// transcript

function renderTurn(state: UiSessionState, index: number): string {
  const turn = state.transcript[index]!;
  if (turn.speaker === "user") {
    return `<li class="turn turn-user">${esc(turn.text)}</li>`;
  }
  const id = turn.response_id ?? "";
  const selected = id !== "" && id === state.selected_response_id;
  const badge = id === "" ? "" :
    `<button class="badge" data-action="select-turn"` +
    ` data-response-id="${esc(id)}">explain</button>`;
  return `<li class="turn turn-bot${selected ? " selected" : ""}"` +
    ` data-response-id="${esc(id)}">${esc(turn.text)}${badge}</li>`;
}

export function renderTranscript(state: UiSessionState): string {
  const items = state.transcript.map((_, i) => renderTurn(state, i));
  return `<ol class="transcript">${items.join("")}</ol>`;
}

// ---------------------------------------------------------------------------
// banners and toasts

export function renderBanner(state: UiSessionState): string {
  if (state.banner === null) return "";
  const retry = state.banner.retry_text === null ? "" :
    `<button data-action="retry">retry</button>`;
  return `<div class="banner" role="alert">${esc(state.banner.message)}` +
    `${retry}<button data-action="dismiss-banner">dismiss</button></div>`;
}

export function renderToast(state: UiSessionState): string {
  if (state.toast === null) return "";
  return `<div class="toast" role="status">${esc(state.toast)}</div>`;
}

// ---------------------------------------------------------------------------
// explanation panel

function renderHit(hit: RankedHit, docs: Record<string, DocumentRecord>): string {
  const doc = docs[hit.doc_id];
  const text = doc === undefined
    ? `<p class="doc-pending">document ${esc(hit.doc_id)}</p>`
    : `<blockquote class="provenance-text">${esc(doc.text)}</blockquote>`;
  const terms = hit.matched_terms
    .map(([term, weight]) =>
      `<span class="term-chip">${esc(term)} ${weight.toFixed(3)}</span>`)
    .join(" ");
  return `<section class="provenance-hit" data-doc-id="${esc(hit.doc_id)}">` +
    `<header>score ${hit.score.toFixed(4)}</header>${text}` +
    `<div class="matched-terms">${terms}</div></section>`;
}

function tripleCell(subject: string, predicate: string, object: string): string {
  return `&lt;${esc(subject)}, ${esc(predicate)}, ${esc(object)}&gt;`;
}

function renderAlignmentRow(match: TripleMatch): string {
  const r = match.response_triple;
  const g = match.graph_triple;
  const slots = match.slot_scores.map((s) => s.toFixed(2)).join(" / ");
  return `<tr class="alignment-row" data-action="show-graph"` +
    ` data-entity="${esc(g.object)}" data-edge-id="${esc(g.edge_id)}">` +
    `<td>${tripleCell(r.subject, r.predicate, r.object)}</td>` +
    `<td>${tripleCell(g.subject, g.predicate, g.object)}</td>` +
    `<td class="score" title="slots ${slots}">${match.score.toFixed(2)}` +
    ` <span class="scope scope-${match.scope}">${match.scope}</span></td></tr>`;
}

export function renderExplanationPanel(
  state: UiSessionState,
  docs: Record<string, DocumentRecord> = {},
): string {
  const report = selectedReport(state);
  if (report === null) {
    return `<div class="panel-empty">Pick a bot turn to see why it was said.</div>`;
  }
  const hits = report.provenance.map((hit) => renderHit(hit, docs)).join("");
  const provenance = hits === ""
    ? `<p class="no-provenance">no training text scored above zero</p>`
    : hits;
  const rows = report.alignments.map(renderAlignmentRow).join("");
  const alignments = rows === ""
    ? `<p class="no-alignments">no graph fact matched this response</p>`
    : `<table class="alignments"><thead><tr>` +
      `<th>generated triple</th><th>training data triple</th><th>score</th>` +
      `</tr></thead><tbody>${rows}</tbody></table>`;
  const unmatched = report.unmatched.length === 0 ? "" :
    `<p class="unmatched">unexplained: ` +
    report.unmatched
      .map((t) => tripleCell(t.subject, t.predicate, t.object))
      .join("; ") + `</p>`;
  const generator = report.generator === null ? "" :
    `<p class="generator">generator: ` +
    `<span class="generator-${esc(report.generator)}">` +
    `${esc(report.generator)}</span></p>`;
  return `<div class="panel" data-response-id="${esc(report.response_id)}">` +
    `<h2 class="panel-response">${esc(report.response_text)}</h2>${generator}` +
    `<h3>training text behind this reply</h3>` +
    `<div class="provenance">${provenance}</div>` +
    `<h3>fact alignment</h3>${alignments}${unmatched}</div>`;
}

// ---------------------------------------------------------------------------
// graph view

export interface GraphViewModel {
  entity: string;
  depth: NeighborhoodDepth;
  subgraph: GraphNeighborhood;
  placed: PlacedNode[];
}

const NODE_FILL: Record<string, string> = {
  center: "#5a3d1e",
  subject: "#8b5a2b", // subjects render brown
  object: "#2e7d32", // objects render green
  both: "#8b5a2b",
  plain: "#607d8b",
};

export function renderDepthSelector(depth: NeighborhoodDepth): string {
  const options = ([1, 2, 3] as const)
    .map((d) =>
      `<option value="${d}"${d === depth ? " selected" : ""}>depth ${d}</option>`)
    .join("");
  return `<label class="depth">neighborhood ` +
    `<select data-action="set-depth">${options}</select></label>`;
}

export function renderGraphSvg(view: GraphViewModel,
                               width = 640, height = 480): string {
  const byId = new Map(view.placed.map((p) => [p.node_id, p]));
  const edges = view.subgraph.edges
    .map((edge) => {
      const a = byId.get(edge.from);
      const b = byId.get(edge.to);
      if (a === undefined || b === undefined) return "";
      const mx = (a.x + b.x) / 2;
      const my = (a.y + b.y) / 2;
      return `<g class="edge" data-edge-id="${esc(edge.edge_id)}">` +
        `<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}"/>` +
        `<text x="${mx}" y="${my}" class="edge-label">` +
        `${esc(edge.predicate)}</text></g>`;
    })
    .join("");
  const nodes = view.placed
    .map((p) => {
      const stroke = p.role === "both" ? "#2e7d32" : "#263238";
      const radius = p.role === "center" ? 18 : 13;
      return `<g class="node role-${p.role}" data-action="recenter"` +
        ` data-entity="${esc(p.canonical)}" data-node-id="${esc(p.node_id)}">` +
        `<circle cx="${p.x}" cy="${p.y}" r="${radius}"` +
        ` fill="${NODE_FILL[p.role]}" stroke="${stroke}" stroke-width="2"/>` +
        `<text x="${p.x}" y="${p.y + radius + 12}" class="node-label">` +
        `${esc(p.canonical)}</text></g>`;
    })
    .join("");
  return `<svg viewBox="0 0 ${width} ${height}" class="graph"` +
    ` xmlns="http://www.w3.org/2000/svg">${edges}${nodes}</svg>`;
}

export function renderGraphPanel(view: GraphViewModel | null): string {
  if (view === null) {
    return `<div class="graph-empty">` +
      `<p>Select an alignment to explore the knowledge graph.</p></div>`;
  }
  const legend = `<div class="legend">` +
    `<span class="legend-subject">subject</span>` +
    `<span class="legend-object">object</span></div>`;
  return `<div class="graph-view" data-entity="${esc(view.entity)}">` +
    `<header>centered on <strong>${esc(view.entity)}</strong> ` +
    `${renderDepthSelector(view.depth)}</header>` +
    `${renderGraphSvg(view)}${legend}` +
    `<p class="graph-counts">${view.subgraph.nodes.length} nodes, ` +
    `${view.subgraph.edges.length} edges</p></div>`;
}

// ---------------------------------------------------------------------------
// whole app

export function renderApp(
  state: UiSessionState,
  docs: Record<string, DocumentRecord> = {},
  graph: GraphViewModel | null = null,
): string {
  return `<div class="app">${renderBanner(state)}${renderToast(state)}` +
    `<main class="chat-column">${renderTranscript(state)}</main>` +
    `<aside class="explanation-column">` +
    `${renderExplanationPanel(state, docs)}</aside>` +
    `<section class="graph-column">${renderGraphPanel(graph)}</section></div>`;
}
