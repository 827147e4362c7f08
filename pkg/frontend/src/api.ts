/** Typed client for the lspace session service. */

export interface SpacePayload {
  id: string;
  n: number;
  concepts: string[];
  state_count: number | null;
  dim_c: number;
  sequences: string[];
}

export interface SessionConfig {
  beta?: number;
  eta?: number;
  theta_lo?: number;
  theta_hi?: number;
  collection_size?: number;
  seed?: number;
}

export interface FinalPayload {
  state: string;
  recently_learned: string[];
  ready_to_learn: string[];
  forced_termination: boolean;
}

export type TranscriptEvent =
  | { type: "ask"; concept: string }
  | { type: "answer"; concept: string; correct: number }
  | { type: "marginal"; concept: string; p: number }
  | { type: "final"; state: string };

export interface SessionPayload {
  id: string;
  space_id: string;
  status: "active" | "done";
  question: string | null;
  marginals: Record<string, number | null>;
  questions_asked: number;
  config: Required<SessionConfig>;
  final?: FinalPayload;
  transcript?: TranscriptEvent[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const resp = await this.fetchFn(this.base + path, init);
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, payload.error ?? resp.statusText);
    }
    return payload as T;
  }

  createSpace(format: "hasse" | "seqs" | "states", text: string): Promise<SpacePayload> {
    return this.request("POST", "/spaces", { format, text });
  }

  getSpace(id: string): Promise<SpacePayload> {
    return this.request("GET", `/spaces/${id}`);
  }

  createSession(spaceId: string, config: SessionConfig = {}): Promise<SessionPayload> {
    return this.request("POST", "/sessions", { space_id: spaceId, config });
  }

  answer(sessionId: string, concept: string, correct: boolean): Promise<SessionPayload> {
    return this.request("POST", `/sessions/${sessionId}/answer`, { concept, correct });
  }

  getSession(id: string): Promise<SessionPayload> {
    return this.request("GET", `/sessions/${id}`);
  }

  deleteSession(id: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/sessions/${id}`);
  }
}
