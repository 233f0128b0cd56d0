/**
 * Graph layout computed client-side from the embedded node/edge lists.
 *
 * Force-directed is the default; a layered mode groups nodes into columns
 * by kind.  Both are deterministic: initial positions come from the sorted
 * node order, and no randomness enters the simulation.
 */

import type { ContractGraph, GraphNode, NodeKind } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export type Positions = Map<string, Point>;

const REPULSION = 6000;
const SPRING = 0.02;
const SPRING_LENGTH = 110;
const CENTER_PULL = 0.015;
const MARGIN = 40;

export function forceLayout(
  graph: ContractGraph,
  width: number,
  height: number,
  iterations = 250
): Positions {
  const nodes = [...graph.nodes].sort((a, b) => a.id.localeCompare(b.id));
  const index = new Map(nodes.map((n, i) => [n.id, i]));
  const n = nodes.length;
  const pos: Point[] = [];
  const radius = Math.max(Math.min(width, height) / 2 - MARGIN, 10);
  for (let i = 0; i < n; i++) {
    const angle = (2 * Math.PI * i) / Math.max(n, 1);
    pos.push({
      x: width / 2 + radius * Math.cos(angle),
      y: height / 2 + radius * Math.sin(angle),
    });
  }

  const springs: Array<[number, number]> = [];
  for (const e of graph.edges) {
    const a = index.get(e.from);
    const b = index.get(e.to);
    if (a !== undefined && b !== undefined && a !== b) {
      springs.push([a, b]);
    }
  }

  for (let step = 0; step < iterations; step++) {
    const cool = 1 - step / iterations;
    const fx = new Array<number>(n).fill(0);
    const fy = new Array<number>(n).fill(0);

    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        const dx = pos[i]!.x - pos[j]!.x;
        const dy = pos[i]!.y - pos[j]!.y;
        const distSq = Math.max(dx * dx + dy * dy, 1);
        const force = REPULSION / distSq;
        const dist = Math.sqrt(distSq);
        fx[i]! += (dx / dist) * force;
        fy[i]! += (dy / dist) * force;
        fx[j]! -= (dx / dist) * force;
        fy[j]! -= (dy / dist) * force;
      }
    }

    for (const [a, b] of springs) {
      const dx = pos[b]!.x - pos[a]!.x;
      const dy = pos[b]!.y - pos[a]!.y;
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const stretch = SPRING * (dist - SPRING_LENGTH);
      fx[a]! += (dx / dist) * stretch;
      fy[a]! += (dy / dist) * stretch;
      fx[b]! -= (dx / dist) * stretch;
      fy[b]! -= (dy / dist) * stretch;
    }

    for (let i = 0; i < n; i++) {
      fx[i]! += (width / 2 - pos[i]!.x) * CENTER_PULL;
      fy[i]! += (height / 2 - pos[i]!.y) * CENTER_PULL;
      pos[i]!.x += Math.max(Math.min(fx[i]! * cool, 25), -25);
      pos[i]!.y += Math.max(Math.min(fy[i]! * cool, 25), -25);
      pos[i]!.x = Math.min(Math.max(pos[i]!.x, MARGIN), width - MARGIN);
      pos[i]!.y = Math.min(Math.max(pos[i]!.y, MARGIN), height - MARGIN);
    }
  }

  const out: Positions = new Map();
  nodes.forEach((node, i) => out.set(node.id, pos[i]!));
  return out;
}

const LAYER_ORDER: Record<NodeKind, number> = {
  contract: 0,
  constructor: 1,
  modifier: 1,
  function: 2,
  loop: 3,
  conditional: 3,
  state_var: 4,
  struct: 4,
  event: 5,
  external_boundary: 5,
};

export function layeredLayout(graph: ContractGraph, width: number, height: number): Positions {
  const byLayer = new Map<number, GraphNode[]>();
  for (const node of [...graph.nodes].sort((a, b) => a.id.localeCompare(b.id))) {
    const layer = LAYER_ORDER[node.kind] ?? 3;
    const bucket = byLayer.get(layer) ?? [];
    bucket.push(node);
    byLayer.set(layer, bucket);
  }
  const layers = [...byLayer.keys()].sort((a, b) => a - b);
  const out: Positions = new Map();
  layers.forEach((layer, col) => {
    const bucket = byLayer.get(layer)!;
    const x = MARGIN + ((width - 2 * MARGIN) * (col + 0.5)) / layers.length;
    bucket.forEach((node, row) => {
      const y = MARGIN + ((height - 2 * MARGIN) * (row + 0.5)) / bucket.length;
      out.set(node.id, { x, y });
    });
  });
  return out;
}
