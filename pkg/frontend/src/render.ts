/** Pure SVG rendering of a quiver; the client never computes algebra, it
 * only draws documents and badges the server reported. */

import { CANVAS, Positions } from "./layout.js";
import type { QPDocument } from "./types.js";

export interface RenderOptions {
  selected?: Set<string>;
  disabled?: Map<string, string>;   // vertex -> tooltip with the violation
  highlightOrbit?: string[];
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderQuiver(
  doc: QPDocument,
  positions: Positions,
  opts: RenderOptions = {},
): string {
  const selected = opts.selected ?? new Set<string>();
  const disabled = opts.disabled ?? new Map<string, string>();
  const orbit = new Set(opts.highlightOrbit ?? []);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${CANVAS.width} ${CANVAS.height}" class="quiver">`,
    `<defs><marker id="arrowhead" markerWidth="8" markerHeight="8" refX="7" refY="3" orient="auto">` +
    `<path d="M0,0 L7,3 L0,6 z" fill="#555"/></marker></defs>`,
  );

  // count parallel arrows per ordered pair so they fan out
  const parallel = new Map<string, number>();
  for (const a of doc.arrows) {
    const key = `${a.from}>${a.to}`;
    parallel.set(key, (parallel.get(key) ?? 0) + 1);
  }
  const seen = new Map<string, number>();
  for (const a of doc.arrows) {
    const from = String(a.from);
    const to = String(a.to);
    const p = positions[from];
    const q = positions[to];
    if (!p || !q) continue;
    const key = `${a.from}>${a.to}`;
    const n = parallel.get(key) ?? 1;
    const idx = seen.get(key) ?? 0;
    seen.set(key, idx + 1);
    const both = (parallel.get(`${a.to}>${a.from}`) ?? 0) > 0;
    const dx = q.x - p.x, dy = q.y - p.y;
    const d = Math.max(Math.hypot(dx, dy), 1);
    const ux = dx / d, uy = dy / d;
    const sx = p.x + ux * 18, sy = p.y + uy * 18;
    const ex = q.x - ux * 20, ey = q.y - uy * 20;
    const spread = (idx - (n - 1) / 2) * 26 + (both ? 14 : 0);
    const mx = (sx + ex) / 2 - uy * spread;
    const my = (sy + ey) / 2 + ux * spread;
    parts.push(
      `<path class="arrow" data-arrow="${esc(a.id)}" d="M ${sx.toFixed(1)} ${sy.toFixed(1)} ` +
      `Q ${mx.toFixed(1)} ${my.toFixed(1)} ${ex.toFixed(1)} ${ey.toFixed(1)}" ` +
      `fill="none" stroke="#555" marker-end="url(#arrowhead)"/>`,
      `<text class="arrow-label" x="${mx.toFixed(1)}" y="${(my - 4).toFixed(1)}" ` +
      `font-size="11" fill="#777" text-anchor="middle">${esc(a.id)}</text>`,
    );
  }

  for (const v of doc.vertices) {
    const label = String(v);
    const pt = positions[label];
    if (!pt) continue;
    const classes = ["vertex"];
    if (selected.has(label)) classes.push("selected");
    if (orbit.has(label)) classes.push("orbit");
    const tooltip = disabled.get(label);
    if (tooltip !== undefined) classes.push("disabled");
    parts.push(
      `<g class="${classes.join(" ")}" data-vertex="${esc(label)}">`,
      tooltip !== undefined ? `<title>${esc(tooltip)}</title>` : "",
      `<circle cx="${pt.x}" cy="${pt.y}" r="16"/>`,
      `<text x="${pt.x}" y="${pt.y + 4}" text-anchor="middle" font-size="13">${esc(label)}</text>`,
      `</g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
