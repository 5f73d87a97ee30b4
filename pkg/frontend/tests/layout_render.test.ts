import { describe, expect, it } from "vitest";

import { layoutQuiver } from "../src/layout.js";
import { renderQuiver } from "../src/render.js";
import type { QPDocument } from "../src/types.js";

const hexDoc: QPDocument = {
  field: "Q",
  vertices: [1, 2, 3, 4, 5, 6],
  arrows: [1, 2, 3, 4, 5, 6].map((i) => ({
    id: `a${i}`,
    from: i,
    to: (i % 6) + 1,
  })),
  potential: [{ coeff: "1", cycle: ["a1", "a2", "a3", "a4", "a5", "a6"] }],
};

describe("layoutQuiver", () => {
  it("is deterministic", () => {
    const p1 = layoutQuiver(hexDoc);
    const p2 = layoutQuiver(hexDoc);
    expect(p1).toEqual(p2);
    expect(Object.keys(p1)).toHaveLength(6);
  });

  it("pins previously placed vertices", () => {
    const first = layoutQuiver(hexDoc);
    const pinnedSpot = { x: 111, y: 222 };
    const second = layoutQuiver(hexDoc, { ...first, "3": pinnedSpot });
    expect(second["3"]).toEqual(pinnedSpot);
    // all other vertices were pinned too, so they are untouched
    expect(second["1"]).toEqual(first["1"]);
  });

  it("keeps coordinates inside the canvas", () => {
    const pos = layoutQuiver(hexDoc);
    for (const p of Object.values(pos)) {
      expect(p.x).toBeGreaterThanOrEqual(30);
      expect(p.y).toBeGreaterThanOrEqual(30);
      expect(p.x).toBeLessThanOrEqual(610);
      expect(p.y).toBeLessThanOrEqual(450);
    }
  });
});

describe("renderQuiver", () => {
  it("draws every vertex and arrow", () => {
    const svg = renderQuiver(hexDoc, layoutQuiver(hexDoc));
    for (let i = 1; i <= 6; i++) {
      expect(svg).toContain(`data-vertex="${i}"`);
      expect(svg).toContain(`data-arrow="a${i}"`);
    }
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("marks selected and disabled vertices, with tooltips", () => {
    const svg = renderQuiver(hexDoc, layoutQuiver(hexDoc), {
      selected: new Set(["1"]),
      disabled: new Map([["2", "vertex 2 lies on a 2-cycle"]]),
    });
    expect(svg).toMatch(/class="vertex selected" data-vertex="1"/);
    expect(svg).toMatch(/class="vertex disabled" data-vertex="2"/);
    expect(svg).toContain("<title>vertex 2 lies on a 2-cycle</title>");
  });

  it("escapes labels", () => {
    const doc: QPDocument = {
      field: "Q",
      vertices: [1, 2],
      arrows: [{ id: "[a<b]", from: 1, to: 2 }],
      potential: [],
    };
    const svg = renderQuiver(doc, layoutQuiver(doc));
    expect(svg).toContain("[a&lt;b]");
    expect(svg).not.toContain("[a<b]");
  });
});
