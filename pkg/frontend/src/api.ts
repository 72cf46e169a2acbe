// Typed client for the hazardqa HTTP API. The UI talks to the service
// exclusively through this module.

export interface QueryResponse {
  answer_text: string;
  pathway: "document" | "structured" | "web";
  sources: string[];
  degraded: boolean;
  rewritten_query: string;
  query_type: string;
  sql: string | null;
  trace_id: string;
}

export interface HistoryEntry {
  user_query: string;
  answer: string;
  disaster_tags: string[];
  location_tags: string[];
  timestamp: number;
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class SessionNotFoundError extends ApiError {
  constructor() {
    super("unknown session", 404);
    this.name = "SessionNotFoundError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class HazardQaClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(`service unreachable: ${String(err)}`, 0);
    }
    if (response.status === 404) {
      throw new SessionNotFoundError();
    }
    if (!response.ok) {
      throw new ApiError(`request failed (${response.status})`, response.status);
    }
    return (await response.json()) as T;
  }

  async createSession(): Promise<string> {
    const body = await this.request<{ session_id: string }>("/sessions", {
      method: "POST",
    });
    return body.session_id;
  }

  async sendQuery(sessionId: string, text: string): Promise<QueryResponse> {
    return this.request<QueryResponse>(`/sessions/${sessionId}/query`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  async fetchHistory(sessionId: string): Promise<HistoryEntry[]> {
    return this.request<HistoryEntry[]>(`/sessions/${sessionId}/history`);
  }
}
