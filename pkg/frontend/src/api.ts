/** Thin typed client for the model service.
 *
 * Every displayed analytic number comes through this module; the UI
 * performs no coverage math of its own. The client records the
 * X-Model-Revision header of the latest response so callers can spot
 * concurrent writers.
 */

import type {
  AnalyzeRequest,
  CoverageReportDoc,
  DiagnosticDoc,
  EditOp,
  ModelDoc,
  TaxonomyDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly diagnostics: DiagnosticDoc[] = [],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  /** Revision of the most recent server response, null before first contact. */
  revision: number | null = null;

  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    // wrap the global so the call is not made with a bound `this`
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  async taxonomy(): Promise<TaxonomyDoc> {
    return this.request<TaxonomyDoc>("GET", "/api/taxonomy");
  }

  async model(): Promise<ModelDoc> {
    return this.request<ModelDoc>("GET", "/api/model");
  }

  async replaceModel(doc: ModelDoc): Promise<{ revision: number; diagnostics: DiagnosticDoc[] }> {
    return this.request("PUT", "/api/model", doc);
  }

  async edits(ops: EditOp[]): Promise<{ revision: number; model: ModelDoc }> {
    return this.request("POST", "/api/edits", ops);
  }

  async analyze(body: AnalyzeRequest): Promise<CoverageReportDoc> {
    return this.request<CoverageReportDoc>("POST", "/api/analyze", body);
  }

  /** URL of the DOT rendering for linking out; no fetch involved. */
  renderDotUrl(scenarioId: string): string {
    return `${this.baseUrl}/api/render/dot?scenario=${encodeURIComponent(scenarioId)}`;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const revision = response.headers.get("X-Model-Revision");
    if (revision !== null) {
      this.revision = Number(revision);
    }
    const text = await response.text();
    let payload: unknown = null;
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        payload = null;
      }
    }
    if (!response.ok) {
      const doc = (payload ?? {}) as { error?: string; diagnostics?: DiagnosticDoc[] };
      const diagnostics = doc.diagnostics ?? [];
      const message =
        doc.error ?? diagnostics.map((d) => d.message).join("; ") ?? `HTTP ${response.status}`;
      throw new ApiError(response.status, message || `HTTP ${response.status}`, diagnostics);
    }
    return payload as T;
  }
}
