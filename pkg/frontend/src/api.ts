/** Typed client for the qpmut HTTP JSON API; all algebra stays server-side. */

import type {
  Analysis,
  ApiErrorBody,
  HistoryEntry,
  QPDocument,
  VerifyReport,
  VertexLabel,
} from "./types.js";

export class ApiError extends Error {
  readonly code: number;
  readonly details: unknown;
  readonly status: number;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.code = body.code;
    this.details = body.details;
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, payload as ApiErrorBody);
    }
    return payload as T;
  }

  fixtures(): Promise<{ names: string[] }> {
    return this.call("GET", "/fixtures");
  }

  loadFixture(name: string): Promise<{ id: string; document: QPDocument }> {
    return this.call("POST", `/fixtures/${encodeURIComponent(name)}`);
  }

  upload(doc: QPDocument): Promise<{ id: string; document: QPDocument }> {
    return this.call("POST", "/qps", doc);
  }

  document(id: string): Promise<QPDocument> {
    return this.call("GET", `/qps/${id}`);
  }

  mutate(id: string, vertices: VertexLabel[]): Promise<{ id: string; document: QPDocument }> {
    return this.call("POST", `/qps/${id}/mutate`, { vertices });
  }

  analysis(id: string): Promise<Analysis> {
    return this.call("GET", `/qps/${id}/analysis`);
  }

  verify(id: string, vertices: VertexLabel[]): Promise<VerifyReport> {
    return this.call("POST", `/qps/${id}/verify`, { vertices });
  }

  history(id: string): Promise<{ chain: HistoryEntry[] }> {
    return this.call("GET", `/qps/${id}/history`);
  }
}

/** Serialize a document exactly as the server and CLI do (2-space indent,
 * trailing newline); exports stay byte-identical to the golden files. */
export function canonicalDocumentText(doc: QPDocument): string {
  return JSON.stringify(doc, null, 2) + "\n";
}
