/** End-to-end: the session layer drives the real HTTP API.
 *
 * Covers the two UI acceptance flows: loading the hexagon and clicking the
 * {1,3,5} orbit exports a document byte-identical to the CLI golden file,
 * and the two-step grid chain completes with green verification badges.
 */

import fs from "node:fs";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { renderQuiver } from "../src/render.js";
import { Session } from "../src/session.js";
import { REPO_ROOT, RunningServer, startServer } from "./server_helper.js";

let server: RunningServer;
let api: ApiClient;

beforeAll(async () => {
  server = await startServer();
  api = new ApiClient(server.base);
}, 30000);

afterAll(() => {
  server.stop();
});

function golden(name: string): string {
  return fs.readFileSync(path.join(REPO_ROOT, "tests", "golden", name), "utf-8");
}

function fixture(name: string): string {
  return fs.readFileSync(path.join(REPO_ROOT, "tests", "fixtures", name), "utf-8");
}

describe("hexagon orbit flow", () => {
  it("loads HEX, shows badges, mutates at the orbit, exports the golden bytes", async () => {
    const session = new Session(api);
    await session.loadFixture("HEX");

    const badges = session.badges();
    expect(badges.selfinjective).toBe(true);
    expect(badges.dimension).toBe(30);
    expect(badges.nakayama).toBe("(1 5 3)(2 6 4)");
    expect(badges.mutableOrbits).toEqual([["1", "3", "5"], ["2", "4", "6"]]);

    // the root export matches the checked-in fixture document
    expect(session.exportText()).toBe(fixture("hex.qp.json"));

    // click the sigma-orbit {1,3,5}
    await session.mutateAt(["1", "3", "5"]);
    const doc = session.document();
    expect(doc.arrows).toHaveLength(9);

    // the rendered quiver shows all nine arrows at the pinned positions
    const svg = renderQuiver(doc, session.positions(), {
      disabled: session.disabledVertices(),
    });
    for (const arrow of ["[a6a1]", "[a2a3]", "[a4a5]", "a1*", "a6*"]) {
      expect(svg).toContain(`data-arrow="${arrow.replace("[", "[")}"`);
    }

    // export is byte-identical to the CLI golden file
    expect(session.exportText()).toBe(golden("hex_mu135.qp.json"));

    // undo restores the previous document byte-identically
    session.undo();
    expect(session.exportText()).toBe(fixture("hex.qp.json"));
  }, 60000);

  it("keeps vertex positions stable across a mutation", async () => {
    const session = new Session(api);
    await session.loadFixture("HEX");
    const before = session.positions();
    await session.mutateAt(["1", "3", "5"]);
    expect(session.positions()).toEqual(before);
  }, 60000);

  it("supports branching exploration", async () => {
    const session = new Session(api);
    const rootId = await session.loadFixture("HEX");
    await session.mutateAt(["1", "3", "5"]);
    session.branchTo(rootId);
    await session.mutateAt(["2", "4", "6"]);
    const walk = session.tree.walk();
    expect(walk).toHaveLength(3);
    expect(session.tree.node(rootId).children).toHaveLength(2);
  }, 60000);
});

describe("grid two-step chain", () => {
  it("applies {1,9} then {3,7} with both verification badges green", async () => {
    const session = new Session(api);
    await session.loadFixture("GRID3");
    expect(session.badges().nakayama).toBe("(1 9)(2 8)(3 7)(4 6)(5)");

    const report1 = await session.verifyAt(["1", "9"]);
    expect(report1.iso_verdict).toBe(true);
    expect(report1.tilting_by_hom).toBe(true);
    expect(report1.tilting_by_sigma).toBe(true);
    await session.mutateAt(["1", "9"]);

    const report2 = await session.verifyAt(["3", "7"]);
    expect(report2.iso_verdict).toBe(true);
    expect(report2.tilting_by_hom).toBe(true);
    await session.mutateAt(["3", "7"]);

    expect(session.document().arrows).toHaveLength(16);
    // both steps recorded on the history path
    const p = session.tree.pathTo();
    expect(p.map((n) => n.vertices)).toEqual([null, ["1", "9"], ["3", "7"]]);
    // badges on the final node come from the server analysis
    expect(session.badges().selfinjective).toBe(true);
  }, 180000);
});

describe("error surfaces", () => {
  it("exposes structured server errors verbatim", async () => {
    const session = new Session(api);
    await session.loadFixture("HEX");
    let caught: unknown = null;
    try {
      await session.mutateAt(["1", "2"]);
    } catch (err) {
      caught = err;
    }
    expect(caught).toBeInstanceOf(ApiError);
    const apiErr = caught as ApiError;
    expect(apiErr.code).toBe(2);
    expect(apiErr.message).toContain("preconditions");
    expect(JSON.stringify(apiErr.details)).toContain("a1");
    // the failed mutation did not extend the history
    expect(session.tree.walk()).toHaveLength(1);
  }, 60000);

  it("serializes mutation requests per node", async () => {
    const session = new Session(api);
    await session.loadFixture("HEX");
    const first = session.mutateAt(["1", "3", "5"]);
    await expect(session.mutateAt(["2", "4", "6"])).rejects.toThrow(/already running/);
    await first;
  }, 60000);
});
