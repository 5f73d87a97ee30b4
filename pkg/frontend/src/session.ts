/** Client session state: documents, analyses, layouts and the history tree.
 *
 * Every displayed value comes from a server response; the client never
 * computes potentials or permutations. Mutation requests are serialized per
 * history node (no optimistic state: the tree only grows on confirmed
 * responses).
 */

import { ApiClient, canonicalDocumentText } from "./api.js";
import { HistoryTree } from "./history.js";
import { layoutQuiver, Positions } from "./layout.js";
import type { Analysis, QPDocument, VerifyReport, VertexLabel } from "./types.js";

export interface Badges {
  selfinjective: boolean;
  dimension: number | null;
  nakayama: string | null;
  mutableOrbits: string[][];
}

export class Session {
  readonly tree = new HistoryTree();
  private docs = new Map<string, QPDocument>();
  private analyses = new Map<string, Analysis>();
  private layouts = new Map<string, Positions>();
  private reports = new Map<string, VerifyReport>();
  private inFlight = new Set<string>();

  constructor(private readonly api: ApiClient) {}

  get currentId(): string {
    const id = this.tree.current;
    if (id === null) throw new Error("no document loaded");
    return id;
  }

  document(id: string = this.currentId): QPDocument {
    const doc = this.docs.get(id);
    if (!doc) throw new Error(`no document cached for ${id}`);
    return doc;
  }

  analysis(id: string = this.currentId): Analysis {
    const a = this.analyses.get(id);
    if (!a) throw new Error(`no analysis cached for ${id}`);
    return a;
  }

  positions(id: string = this.currentId): Positions {
    const p = this.layouts.get(id);
    if (!p) throw new Error(`no layout cached for ${id}`);
    return p;
  }

  report(id: string): VerifyReport | undefined {
    return this.reports.get(id);
  }

  private async register(id: string, doc: QPDocument, parent: string | null,
                         vertices: string[] | null): Promise<void> {
    this.docs.set(id, doc);
    const pinned = parent ? this.layouts.get(parent) ?? {} : {};
    this.layouts.set(id, layoutQuiver(doc, pinned));
    if (parent === null) {
      this.tree.setRoot(id);
    } else {
      this.tree.addChild(parent, id, vertices ?? []);
    }
    this.analyses.set(id, await this.api.analysis(id));
  }

  async loadFixture(name: string): Promise<string> {
    const { id, document } = await this.api.loadFixture(name);
    await this.register(id, document, null, null);
    return id;
  }

  async upload(doc: QPDocument): Promise<string> {
    const { id, document } = await this.api.upload(doc);
    await this.register(id, document, null, null);
    return id;
  }

  /** Mutate the current node; at most one in-flight request per node. */
  async mutateAt(vertices: VertexLabel[]): Promise<string> {
    const from = this.currentId;
    if (this.inFlight.has(from)) {
      throw new Error("a mutation from this node is already running");
    }
    this.inFlight.add(from);
    try {
      const { id, document } = await this.api.mutate(from, vertices);
      await this.register(id, document, from, vertices.map(String));
      return id;
    } finally {
      this.inFlight.delete(from);
    }
  }

  async verifyAt(vertices: VertexLabel[]): Promise<VerifyReport> {
    const from = this.currentId;
    const report = await this.api.verify(from, vertices);
    this.reports.set(from, report);
    return report;
  }

  /** Step back to the parent node; state is replayed from caches only. */
  undo(): string | null {
    return this.tree.undo();
  }

  branchTo(id: string): void {
    this.tree.select(id);
  }

  /** Canonical text of the current document, byte-identical to the CLI. */
  exportText(id: string = this.currentId): string {
    return canonicalDocumentText(this.document(id));
  }

  badges(id: string = this.currentId): Badges {
    const a = this.analysis(id);
    return {
      selfinjective: a.selfinjective,
      dimension: a.dimension,
      nakayama: a.nakayama,
      mutableOrbits: a.orbits.filter((o) => o.mutable).map((o) => o.vertices),
    };
  }

  /** Vertices that cannot take part in any mutation, with the reason. */
  disabledVertices(id: string = this.currentId): Map<string, string> {
    const a = this.analysis(id);
    const out = new Map<string, string>();
    for (const v of a.vertices) {
      if (v.on_two_cycle) {
        out.set(v.label, `vertex ${v.label} lies on a 2-cycle`);
      }
    }
    return out;
  }
}
