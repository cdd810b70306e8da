/**
 * Client for the session service HTTP API. The fetch implementation is
 * injectable so the client is testable without a network.
 *
 * Scene requests go through a latest-wins guard: starting a new request
 * aborts the previous one, and a response that arrives after a newer
 * request has started is reported as stale instead of applied.
 */

export interface SessionRow {
  session_id: string;
  label: string;
  created_at: string;
  duration: number;
}

export interface SceneParams {
  density: number;
  smooth: number;
  layers: readonly string[];
}

export const DEFAULT_SCENE_PARAMS: SceneParams = {
  density: 1.0,
  smooth: 1,
  layers: ["gm", "avatar", "fine"],
};

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

async function errorFrom(response: Response): Promise<ApiError> {
  let code = `HTTP ${response.status}`;
  let message = response.statusText || code;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    if (typeof body.error === "string") code = body.error;
    if (typeof body.message === "string") message = body.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, message);
}

export class ServiceClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = (...args) => fetch(...args)) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private url(path: string): string {
    return `${this.base}/api/v1${path}`;
  }

  async health(): Promise<{ status: string; version: string; session_count: number }> {
    const response = await this.fetchImpl(this.url("/health"));
    if (!response.ok) throw await errorFrom(response);
    return response.json();
  }

  async listSessions(): Promise<SessionRow[]> {
    const response = await this.fetchImpl(this.url("/sessions"));
    if (!response.ok) throw await errorFrom(response);
    const body = (await response.json()) as { sessions: SessionRow[] };
    return body.sessions;
  }

  /** Raw scene document text for a stored session. */
  async getSceneText(
    sessionId: string,
    params: SceneParams = DEFAULT_SCENE_PARAMS,
    signal?: AbortSignal,
  ): Promise<string> {
    const query = new URLSearchParams({
      density: String(params.density),
      smooth: String(params.smooth),
      layers: params.layers.join(","),
    });
    const response = await this.fetchImpl(
      this.url(`/sessions/${encodeURIComponent(sessionId)}/scene?${query}`),
      signal ? { signal } : undefined,
    );
    if (!response.ok) throw await errorFrom(response);
    return response.text();
  }
}

export type LatestWinsResult<T> = { stale: true } | { stale: false; value: T };

/**
 * At most one request in flight: starting a new run aborts the previous
 * one, and a previous run that settles late resolves as stale.
 */
export class LatestWins {
  private seq = 0;
  private controller: AbortController | null = null;

  get inFlight(): boolean {
    return this.controller !== null;
  }

  async run<T>(fn: (signal: AbortSignal) => Promise<T>): Promise<LatestWinsResult<T>> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const mine = ++this.seq;
    try {
      const value = await fn(controller.signal);
      if (mine !== this.seq) return { stale: true };
      this.controller = null;
      return { stale: false, value };
    } catch (exc) {
      if (mine !== this.seq) return { stale: true };
      this.controller = null;
      throw exc;
    }
  }
}
