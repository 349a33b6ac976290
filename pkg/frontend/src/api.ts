/** Minimal typed client for the prompt-building HTTP API. */

import type {
  ApiErrorBody,
  PromptReport,
  SessionSnapshot,
  SuggestRequest,
  SuggestResponse,
  WizardAction,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly body: ApiErrorBody;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.body = body;
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const init: RequestInit = { method, signal: signal ?? null };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const payload = (await response.json()) as T & { error?: ApiErrorBody };
    if (!response.ok) {
      const error = payload.error ?? {
        code: "unknown_error",
        message: `Unexpected response (HTTP ${response.status}).`,
        retriable: false,
      };
      throw new ApiError(response.status, error);
    }
    return payload;
  }

  createSession(): Promise<SessionSnapshot> {
    return this.request("POST", "/sessions");
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request("GET", `/sessions/${id}`);
  }

  applyAction(id: string, action: WizardAction): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${id}/action`, action);
  }

  suggest(
    id: string,
    query: SuggestRequest,
    signal?: AbortSignal,
  ): Promise<SuggestResponse> {
    return this.request("POST", `/sessions/${id}/suggest`, query, signal);
  }

  getPrompt(id: string): Promise<PromptReport> {
    return this.request("GET", `/sessions/${id}/prompt`);
  }
}
