/** Deterministic force-directed layout with per-session pinning.
 *
 * Vertices start on a circle in input order and relax under spring forces
 * along arrows plus pairwise repulsion; everything is seeded and iteration
 * counts are fixed, so the same document always lays out the same way.
 * Vertices that already have a pinned position keep it, which keeps
 * diagrams stable across mutations (mutation never changes the vertex set).
 */

import type { QPDocument } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export type Positions = Record<string, Point>;

const WIDTH = 640;
const HEIGHT = 480;
const ITERATIONS = 120;
const SPRING = 0.03;
const SPRING_LENGTH = 140;
const REPULSION = 22000;

export function layoutQuiver(doc: QPDocument, pinned: Positions = {}): Positions {
  const labels = doc.vertices.map(String);
  const pos: Positions = {};
  const free: string[] = [];
  labels.forEach((v, i) => {
    if (pinned[v]) {
      pos[v] = { ...pinned[v] };
    } else {
      const angle = (2 * Math.PI * i) / labels.length;
      pos[v] = {
        x: WIDTH / 2 + Math.cos(angle) * 170,
        y: HEIGHT / 2 + Math.sin(angle) * 170,
      };
      free.push(v);
    }
  });
  if (free.length === 0) return pos;

  const edges = doc.arrows.map((a) => [String(a.from), String(a.to)] as const);
  for (let it = 0; it < ITERATIONS; it++) {
    const force: Positions = {};
    for (const v of labels) force[v] = { x: 0, y: 0 };
    for (let i = 0; i < labels.length; i++) {
      for (let j = i + 1; j < labels.length; j++) {
        const a = labels[i], b = labels[j];
        let dx = pos[a].x - pos[b].x;
        let dy = pos[a].y - pos[b].y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const f = REPULSION / d2;
        const d = Math.sqrt(d2);
        dx /= d; dy /= d;
        force[a].x += dx * f; force[a].y += dy * f;
        force[b].x -= dx * f; force[b].y -= dy * f;
      }
    }
    for (const [a, b] of edges) {
      const dx = pos[b].x - pos[a].x;
      const dy = pos[b].y - pos[a].y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const f = SPRING * (d - SPRING_LENGTH);
      force[a].x += (dx / d) * f; force[a].y += (dy / d) * f;
      force[b].x -= (dx / d) * f; force[b].y -= (dy / d) * f;
    }
    const damp = 0.85 ** (1 + it / 20);
    for (const v of free) {
      pos[v].x += force[v].x * damp * 0.02 * 10;
      pos[v].y += force[v].y * damp * 0.02 * 10;
      pos[v].x = Math.min(Math.max(pos[v].x, 30), WIDTH - 30);
      pos[v].y = Math.min(Math.max(pos[v].y, 30), HEIGHT - 30);
    }
  }
  for (const v of free) {
    pos[v] = { x: Math.round(pos[v].x * 100) / 100, y: Math.round(pos[v].y * 100) / 100 };
  }
  return pos;
}

export const CANVAS = { width: WIDTH, height: HEIGHT };
