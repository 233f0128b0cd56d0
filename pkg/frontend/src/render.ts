/**
 * Canvas painter for contract graphs.  Pure drawing: positions come from
 * layout.ts, highlight sets from session.focusSelection.  When no 2d
 * context is available (headless test DOM) rendering is a no-op.
 */

import type { Positions } from "./layout.js";
import type { ContractGraph, FocusSelection, GraphNode } from "./types.js";

const EDGE_COLORS: Record<string, string> = {
  data_write: "#e74c3c",
  data_read: "#2980b9",
  input_dependency: "#16a085",
  initialization: "#8e44ad",
  systemic_call: "#d35400",
  emits: "#7f8c8d",
  guarded_by: "#f39c12",
  contains: "#95a5a6",
};

const DASHED_KINDS = new Set(["data_read", "emits", "systemic_call", "guarded_by"]);

const NODE_COLORS: Record<string, string> = {
  contract: "#34495e",
  function: "#2980b9",
  constructor: "#8e44ad",
  modifier: "#f39c12",
  state_var: "#c0392b",
  event: "#7f8c8d",
  struct: "#16a085",
  loop: "#d35400",
  conditional: "#e67e22",
  external_boundary: "#2c3e50",
};

export function drawGraph(
  canvas: HTMLCanvasElement,
  graph: ContractGraph,
  positions: Positions,
  highlight: FocusSelection | null
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const dimmed = highlight !== null && highlight.nodeIds.size > 0;

  for (const edge of graph.edges) {
    const a = positions.get(edge.from);
    const b = positions.get(edge.to);
    if (!a || !b) {
      continue;
    }
    const active =
      !dimmed || (highlight!.nodeIds.has(edge.from) && highlight!.nodeIds.has(edge.to));
    ctx.globalAlpha = active ? 0.9 : 0.12;
    ctx.strokeStyle = EDGE_COLORS[edge.kind] ?? "#999";
    ctx.lineWidth = active && dimmed ? 2 : 1.2;
    ctx.setLineDash(DASHED_KINDS.has(edge.kind) ? [5, 4] : []);
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
    drawArrowHead(ctx, a.x, a.y, b.x, b.y);
  }
  ctx.setLineDash([]);

  for (const node of graph.nodes) {
    const p = positions.get(node.id);
    if (!p) {
      continue;
    }
    const active = !dimmed || highlight!.nodeIds.has(node.id);
    ctx.globalAlpha = active ? 1 : 0.18;
    drawNode(ctx, node, p.x, p.y, dimmed && active);
  }
  ctx.globalAlpha = 1;
}

function drawArrowHead(
  ctx: CanvasRenderingContext2D,
  x1: number,
  y1: number,
  x2: number,
  y2: number
): void {
  const angle = Math.atan2(y2 - y1, x2 - x1);
  const mx = x1 + (x2 - x1) * 0.62;
  const my = y1 + (y2 - y1) * 0.62;
  ctx.beginPath();
  ctx.moveTo(mx, my);
  ctx.lineTo(mx - 7 * Math.cos(angle - 0.4), my - 7 * Math.sin(angle - 0.4));
  ctx.moveTo(mx, my);
  ctx.lineTo(mx - 7 * Math.cos(angle + 0.4), my - 7 * Math.sin(angle + 0.4));
  ctx.stroke();
}

function drawNode(
  ctx: CanvasRenderingContext2D,
  node: GraphNode,
  x: number,
  y: number,
  emphasized: boolean
): void {
  const color = NODE_COLORS[node.kind] ?? "#555";
  ctx.fillStyle = color;
  ctx.strokeStyle = emphasized ? "#ffd54f" : "#1b1b1b";
  ctx.lineWidth = emphasized ? 3 : 1;
  ctx.beginPath();
  switch (node.kind) {
    case "contract":
      ctx.rect(x - 34, y - 14, 68, 28);
      break;
    case "state_var":
      roundedRect(ctx, x - 30, y - 12, 60, 24, 10);
      break;
    case "conditional":
      ctx.moveTo(x, y - 16);
      ctx.lineTo(x + 22, y);
      ctx.lineTo(x, y + 16);
      ctx.lineTo(x - 22, y);
      ctx.closePath();
      break;
    case "loop":
      hexagon(ctx, x, y, 20);
      break;
    case "external_boundary":
      ctx.ellipse(x, y, 30, 16, 0, 0, 2 * Math.PI);
      ctx.fill();
      ctx.stroke();
      ctx.beginPath();
      ctx.ellipse(x, y, 25, 11, 0, 0, 2 * Math.PI);
      break;
    default:
      ctx.ellipse(x, y, 30, 15, 0, 0, 2 * Math.PI);
  }
  ctx.fill();
  ctx.stroke();
  ctx.fillStyle = "#f4f4f4";
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText(shorten(node.label), x, y);
}

function roundedRect(
  ctx: CanvasRenderingContext2D,
  x: number,
  y: number,
  w: number,
  h: number,
  r: number
): void {
  ctx.moveTo(x + r, y);
  ctx.arcTo(x + w, y, x + w, y + h, r);
  ctx.arcTo(x + w, y + h, x, y + h, r);
  ctx.arcTo(x, y + h, x, y, r);
  ctx.arcTo(x, y, x + w, y, r);
  ctx.closePath();
}

function hexagon(ctx: CanvasRenderingContext2D, x: number, y: number, r: number): void {
  for (let i = 0; i < 6; i++) {
    const a = (Math.PI / 3) * i;
    const px = x + r * Math.cos(a);
    const py = y + r * 0.8 * Math.sin(a);
    if (i === 0) {
      ctx.moveTo(px, py);
    } else {
      ctx.lineTo(px, py);
    }
  }
  ctx.closePath();
}

function shorten(label: string): string {
  return label.length > 14 ? label.slice(0, 12) + "…" : label;
}
