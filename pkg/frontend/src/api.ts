/** Typed client for the chat service. All reads and writes go through
 * here; the UI never computes scores or graph data on its own.
 */

import type {
  ConversationLevel,
  DocumentRecord,
  ExplanationReport,
  GeneratorKind,
  GraphExport,
  GraphNeighborhood,
  HealthInfo,
  MessageResponse,
  NeighborhoodDepth,
  SessionCreated,
} from "./types.js";

export class ApiRequestError extends Error {
  /** Machine-readable error code from the service, or "connection_failed"
   * when the request never reached it. */
  readonly code: string;
  /** HTTP status, 0 for transport failures. */
  readonly status: number;

  constructor(code: string, status: number, message: string) {
    super(message);
    this.name = "ApiRequestError";
    this.code = code;
    this.status = status;
  }
}

export interface CreateSessionOptions {
  level?: ConversationLevel;
  topic?: string;
  generator?: GeneratorKind;
  session_id?: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      const reason = err instanceof Error ? err.message : String(err);
      throw new ApiRequestError(
        "connection_failed", 0, `cannot reach service: ${reason}`);
    }
    if (!response.ok) {
      let code = "http_error";
      let message = `request failed with status ${response.status}`;
      try {
        const body = (await response.json()) as { code?: string; message?: string };
        if (typeof body.code === "string") code = body.code;
        if (typeof body.message === "string") message = body.message;
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiRequestError(code, response.status, message);
    }
    return response;
  }

  private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.request(path, init);
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.requestJson<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSession(options: CreateSessionOptions = {}): Promise<SessionCreated> {
    const body: Record<string, string> = {};
    if (options.level !== undefined) body.level = options.level;
    if (options.topic !== undefined) body.topic = options.topic;
    if (options.generator !== undefined) body.generator = options.generator;
    if (options.session_id !== undefined) body.session_id = options.session_id;
    return this.post("/api/sessions", body);
  }

  sendMessage(sessionId: string, text: string): Promise<MessageResponse> {
    const id = encodeURIComponent(sessionId);
    return this.post(`/api/sessions/${id}/messages`, { text });
  }

  getExplanation(responseId: string): Promise<ExplanationReport> {
    const id = encodeURIComponent(responseId);
    return this.requestJson(`/api/responses/${id}/explanation`);
  }

  neighborhood(entity: string, depth: NeighborhoodDepth): Promise<GraphNeighborhood> {
    const query = `entity=${encodeURIComponent(entity)}&depth=${depth}`;
    return this.requestJson(`/api/graph/neighborhood?${query}`);
  }

  exportGraph(): Promise<GraphExport> {
    return this.requestJson("/api/graph/export?format=structured");
  }

  async exportGraphScript(): Promise<string> {
    const response = await this.request("/api/graph/export?format=import-script");
    return response.text();
  }

  getDocument(docId: string): Promise<DocumentRecord> {
    return this.requestJson(`/api/documents/${encodeURIComponent(docId)}`);
  }

  health(): Promise<HealthInfo> {
    return this.requestJson("/api/healthz");
  }
}
