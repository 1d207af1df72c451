/** Seeded force-directed layout for graph neighborhoods.
 *
 * Deterministic by construction: positions come from a seeded PRNG and a
 * fixed iteration count, never from Math.random, so snapshots are stable
 * across runs and test assertions can pin exact coordinates.
 */

import type { GraphEdge, GraphNode } from "./types.js";

/** Small fast PRNG over a 32-bit state; returns floats in [0, 1). */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export type VisualRole = "center" | "subject" | "object" | "both" | "plain";

export interface PlacedNode {
  node_id: string;
  canonical: string;
  x: number;
  y: number;
  role: VisualRole;
}

export interface LayoutOptions {
  width?: number;
  height?: number;
  iterations?: number;
  seed?: number;
}

function visualRole(node: GraphNode, centerId: string | null): VisualRole {
  if (node.node_id === centerId) return "center";
  const subject = node.roles.includes("subject");
  const object = node.roles.includes("object");
  if (subject && object) return "both";
  if (subject) return "subject";
  if (object) return "object";
  return "plain";
}

/** Fruchterman-Reingold style layout; the center node, when given, is
 * pinned to the middle of the canvas. */
export function layoutGraph(
  nodes: GraphNode[],
  edges: GraphEdge[],
  center: string | null = null,
  options: LayoutOptions = {},
): PlacedNode[] {
  const width = options.width ?? 640;
  const height = options.height ?? 480;
  const iterations = options.iterations ?? 150;
  const seed = options.seed ?? 42;
  if (nodes.length === 0) return [];

  const rand = mulberry32(seed);
  const margin = 24;
  const xs = new Float64Array(nodes.length);
  const ys = new Float64Array(nodes.length);
  const indexOf = new Map<string, number>();
  nodes.forEach((node, i) => {
    indexOf.set(node.node_id, i);
    xs[i] = margin + rand() * (width - 2 * margin);
    ys[i] = margin + rand() * (height - 2 * margin);
  });
  const centerIdx = center !== null ? indexOf.get(center) ?? -1 : -1;
  if (centerIdx >= 0) {
    xs[centerIdx] = width / 2;
    ys[centerIdx] = height / 2;
  }

  const pairs: Array<[number, number]> = [];
  for (const edge of edges) {
    const a = indexOf.get(edge.from);
    const b = indexOf.get(edge.to);
    if (a !== undefined && b !== undefined && a !== b) pairs.push([a, b]);
  }

  const area = width * height;
  const k = Math.sqrt(area / nodes.length);
  let temperature = width / 8;
  const cooling = temperature / (iterations + 1);

  const dx = new Float64Array(nodes.length);
  const dy = new Float64Array(nodes.length);
  for (let step = 0; step < iterations; step += 1) {
    dx.fill(0);
    dy.fill(0);
    for (let i = 0; i < nodes.length; i += 1) {
      for (let j = i + 1; j < nodes.length; j += 1) {
        let vx = xs[i]! - xs[j]!;
        let vy = ys[i]! - ys[j]!;
        let dist = Math.hypot(vx, vy);
        if (dist < 1e-9) {
          // coincident points: nudge apart deterministically
          vx = 0.01 * (i - j);
          vy = 0.01;
          dist = Math.hypot(vx, vy);
        }
        const force = (k * k) / dist;
        dx[i]! += (vx / dist) * force;
        dy[i]! += (vy / dist) * force;
        dx[j]! -= (vx / dist) * force;
        dy[j]! -= (vy / dist) * force;
      }
    }
    for (const [a, b] of pairs) {
      const vx = xs[a]! - xs[b]!;
      const vy = ys[a]! - ys[b]!;
      const dist = Math.max(Math.hypot(vx, vy), 1e-9);
      const force = (dist * dist) / k;
      dx[a]! -= (vx / dist) * force;
      dy[a]! -= (vy / dist) * force;
      dx[b]! += (vx / dist) * force;
      dy[b]! += (vy / dist) * force;
    }
    for (let i = 0; i < nodes.length; i += 1) {
      if (i === centerIdx) continue;
      const move = Math.hypot(dx[i]!, dy[i]!);
      if (move < 1e-9) continue;
      const capped = Math.min(move, temperature);
      xs[i] = xs[i]! + (dx[i]! / move) * capped;
      ys[i] = ys[i]! + (dy[i]! / move) * capped;
      xs[i] = Math.min(width - margin, Math.max(margin, xs[i]!));
      ys[i] = Math.min(height - margin, Math.max(margin, ys[i]!));
    }
    temperature -= cooling;
  }

  return nodes.map((node, i) => ({
    node_id: node.node_id,
    canonical: node.canonical,
    x: Math.round(xs[i]! * 100) / 100,
    y: Math.round(ys[i]! * 100) / 100,
    role: visualRole(node, center),
  }));
}
