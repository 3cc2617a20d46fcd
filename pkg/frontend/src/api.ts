/**
 * Typed client for the bidkit session service.
 *
 * The UI is a thin client: all rule legality and scoring live on the
 * server, and every view here renders only fields the service returned.
 */

export interface SessionView {
  session: string;
  deal_count: number;
  plays: number;
  completed: number;
  current_play: number | null;
  state: "active" | "complete";
}

export interface HistoryEntry {
  call: number;
  name: string;
}

export interface PlayView {
  session: string;
  play: number;
  deal_index: number;
  seat: string;
  hand: string[];
  history: HistoryEntry[];
  version: number;
  to_act: boolean;
  legal_calls: number[];
  complete: boolean;
  ns_score: number | null;
}

export interface PlayAssignment {
  play: number;
  seat: string;
  partner: "agent" | "baseline";
  ns_score: number;
}

export interface DealSummary {
  deal_index: number;
  imp: number;
  plays: PlayAssignment[];
}

export interface SessionSummary {
  session: string;
  deals: DealSummary[];
  mean_imp: number;
  sem: number;
  n: number;
}

export interface CreateSessionOptions {
  deal_count?: number;
  seed?: number;
  agent?: string;
  baseline?: string;
}

/** Error carrying the HTTP status and the server's detail payload. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
    this.name = "ApiError";
  }

  /** True when the table advanced underneath us (stale version or an
   * out-of-order play-through); the UI shows a "table moved on" banner
   * and refreshes instead of treating this as a failure. */
  get tableMovedOn(): boolean {
    return this.status === 409;
  }

  /** The server's legal-call list, when an illegal call was rejected. */
  get legalCalls(): number[] | null {
    const d = this.detail as { legal_calls?: number[] } | null;
    return d && Array.isArray(d.legal_calls) ? d.legal_calls : null;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, init);
  let body: unknown = null;
  const text = await res.text();
  if (text) {
    try {
      body = JSON.parse(text);
    } catch {
      body = text;
    }
  }
  if (!res.ok) {
    const detail =
      body && typeof body === "object" && "detail" in body
        ? (body as { detail: unknown }).detail
        : body;
    throw new ApiError(res.status, detail);
  }
  return body as T;
}

export class SessionClient {
  constructor(readonly baseUrl: string) {}

  createSession(options: CreateSessionOptions = {}): Promise<SessionView> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(options),
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return request(`${this.baseUrl}/sessions/${sessionId}`);
  }

  getPlay(sessionId: string, play: number): Promise<PlayView> {
    return request(`${this.baseUrl}/sessions/${sessionId}/plays/${play}`);
  }

  /** Post a call with optimistic concurrency: `version` must match the
   * auction length the caller last saw, or the server answers 409. */
  postCall(
    sessionId: string,
    play: number,
    callId: number,
    version?: number,
  ): Promise<PlayView> {
    return request(`${this.baseUrl}/sessions/${sessionId}/plays/${play}/call`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ call_id: callId, version }),
    });
  }

  getSummary(sessionId: string): Promise<SessionSummary> {
    return request(`${this.baseUrl}/sessions/${sessionId}/summary`);
  }
}
