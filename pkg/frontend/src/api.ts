// Thin typed client for the pipeline service. The fetch implementation is
// injectable so tests can run against stubs or a local service.

import type {
  CandidatesView,
  ConflictBody,
  Decision,
  FitPayload,
  GraphPayload,
  SeriesPayload,
  SessionState,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ConflictError extends Error {
  readonly conflicts: string[];

  constructor(body: ConflictBody) {
    super(body.error);
    this.conflicts = body.conflicts ?? [];
  }
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(`HTTP ${status}: ${message}`);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(this.base + path);
    if (!resp.ok) {
      throw new ApiError(resp.status, await resp.text());
    }
    return (await resp.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (resp.status === 409) {
      throw new ConflictError((await resp.json()) as ConflictBody);
    }
    if (!resp.ok) {
      throw new ApiError(resp.status, await resp.text());
    }
    return (await resp.json()) as T;
  }

  sessionState(): Promise<SessionState> {
    return this.get("/session/state");
  }

  candidates(): Promise<CandidatesView> {
    return this.get("/session/candidates");
  }

  graph(): Promise<GraphPayload> {
    return this.get("/session/graph");
  }

  postDecisions(decisions: Decision[]): Promise<SessionState> {
    return this.post("/session/decisions", { decisions });
  }

  iterate(): Promise<SessionState> {
    return this.post("/session/iterate", {});
  }

  opinionSeries(scope: string = "whole"): Promise<SeriesPayload> {
    return this.get(`/series/opinion?scope=${encodeURIComponent(scope)}`);
  }

  pollSeries(): Promise<SeriesPayload> {
    return this.get("/series/polls");
  }

  fitSeries(): Promise<FitPayload> {
    return this.get("/series/fit");
  }

  baselineSeries(): Promise<Record<string, SeriesPayload>> {
    return this.get("/series/baselines");
  }
}
