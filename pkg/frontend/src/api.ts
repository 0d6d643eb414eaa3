// Thin typed client over the registry HTTP API. The console never computes
// workflow rules itself; everything displayed comes from these calls.

import type {
  AdvisoryDoc,
  CaseActions,
  CaseView,
  FindingDoc,
  Session,
  TransitionTable,
} from "./types.js";

export type ErrorClass = "validation" | "permission" | "conflict" | "transport" | "not_found";

export class ApiError extends Error {
  constructor(
    public readonly klass: ErrorClass,
    public readonly status: number,
    message: string,
    public readonly code: string = "",
    public readonly findings: FindingDoc[] = [],
    public readonly actualVersion: number | null = null,
  ) {
    super(message);
  }
}

function classify(status: number, code: string): ErrorClass {
  if (status === 401 || status === 403) return "permission";
  if (status === 404) return "not_found";
  if (status === 409) return "conflict";
  if (status === 400 || status === 422) return "validation";
  return "transport";
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    public readonly baseUrl: string,
    public token: string | null = null,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private headers(): Record<string, string> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers: this.headers(),
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (error) {
      throw new ApiError("transport", 0, `cannot reach registry: ${String(error)}`);
    }
    const text = await response.text();
    let doc: Record<string, unknown> = {};
    if (text) {
      try {
        doc = JSON.parse(text) as Record<string, unknown>;
      } catch {
        doc = { message: text };
      }
    }
    if (!response.ok) {
      const code = typeof doc.error === "string" ? doc.error : "";
      throw new ApiError(
        classify(response.status, code),
        response.status,
        typeof doc.message === "string" ? doc.message : response.statusText,
        code,
        Array.isArray(doc.findings) ? (doc.findings as FindingDoc[]) : [],
        typeof doc.actual_version === "number" ? doc.actual_version : null,
      );
    }
    return doc as T;
  }

  async whoami(): Promise<Session> {
    const doc = await this.request<{ actor_id: string; display_name: string; roles: string[] }>(
      "GET",
      "/whoami",
    );
    return { actorId: doc.actor_id, displayName: doc.display_name, roles: doc.roles };
  }

  listCases(): Promise<{ cases: CaseView[] }> {
    return this.request("GET", "/cases");
  }

  getCase(caseId: string): Promise<CaseView> {
    return this.request("GET", `/cases/${caseId}`);
  }

  getActions(caseId: string): Promise<CaseActions> {
    return this.request("GET", `/cases/${caseId}/actions`);
  }

  postTransition(
    caseId: string,
    action: string,
    payload: Record<string, unknown>,
    expectedVersion: number,
  ): Promise<CaseView> {
    return this.request("POST", `/cases/${caseId}/transitions`, {
      action,
      payload,
      expected_version: expectedVersion,
    });
  }

  attachEvidence(
    caseId: string,
    n: number,
    k: number,
    samplingProtocol: string,
    rawPayload: string | null,
  ): Promise<CaseView> {
    return this.request("POST", `/cases/${caseId}/evidence`, {
      n,
      k,
      sampling_protocol: samplingProtocol,
      raw_payload: rawPayload,
    });
  }

  adjudicate(caseId: string): Promise<{ case_id: string; recommendation: unknown; version: number }> {
    return this.request("POST", `/cases/${caseId}/adjudicate`, {});
  }

  transitionTable(): Promise<TransitionTable> {
    return this.request("GET", "/meta/transition-table");
  }

  findingCatalogue(): Promise<{ catalogue_version: string; findings: unknown[] }> {
    return this.request("GET", "/meta/finding-catalogue");
  }

  advisories(page?: string): Promise<{ advisories: AdvisoryDoc[]; next_page_token: string | null }> {
    return this.request("GET", page ? `/advisories?page=${encodeURIComponent(page)}` : "/advisories");
  }

  publicDb(): Promise<Record<string, unknown>> {
    return this.request("GET", "/export/public-db");
  }

  cfe(cfeId: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/cfe/${cfeId}`);
  }

  cfeHex(cfeId: string): Promise<{ statements: Array<Record<string, unknown>> }> {
    return this.request("GET", `/cfe/${cfeId}/hex`);
  }

  lintCard(cardJson: string): Promise<{ registered: boolean; findings: FindingDoc[] }> {
    return this.request("POST", "/model-cards?dry_run=true", JSON.parse(cardJson));
  }

  evaluateHex(body: Record<string, unknown>): Promise<{ statements: Array<Record<string, unknown>> }> {
    return this.request("POST", "/hex/evaluate", body);
  }
}
