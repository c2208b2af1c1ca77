// Typed client for the results API. fetch is injected so tests can
// stub the transport; every displayed number originates from one of
// these responses.

import type {
  LengthBreakdown,
  PerturbationsResponse,
  RunDetail,
  RunSummary,
  SegmentPage,
  SegmentRecord,
  SignificanceReport,
  SignificanceRequest,
  ToxicityReport,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new ApiError(response.status, `GET ${path} -> ${response.status}`);
    }
    return (await response.json()) as T;
  }

  listRuns(): Promise<RunSummary[]> {
    return this.get("/runs");
  }

  runDetail(id: string): Promise<RunDetail> {
    return this.get(`/runs/${encodeURIComponent(id)}`);
  }

  segments(
    id: string,
    offset = 0,
    limit = 50,
    sort?: string,
  ): Promise<SegmentPage> {
    const params = new URLSearchParams({
      offset: String(offset),
      limit: String(limit),
    });
    if (sort) params.set("sort", sort);
    return this.get(`/runs/${encodeURIComponent(id)}/segments?${params}`);
  }

  segment(id: string, segmentId: string): Promise<SegmentRecord> {
    return this.get(
      `/runs/${encodeURIComponent(id)}/segments/${encodeURIComponent(segmentId)}`,
    );
  }

  lengthBreakdown(id: string, metric: string): Promise<LengthBreakdown> {
    return this.get(
      `/runs/${encodeURIComponent(id)}/length?metric=${encodeURIComponent(metric)}`,
    );
  }

  toxicity(id: string): Promise<ToxicityReport> {
    return this.get(`/runs/${encodeURIComponent(id)}/toxicity`);
  }

  gender(id: string): Promise<Record<string, unknown>> {
    return this.get(`/runs/${encodeURIComponent(id)}/gender`);
  }

  perturbations(task: string, models: string[]): Promise<PerturbationsResponse> {
    const params = new URLSearchParams({ task, models: models.join(",") });
    return this.get(`/perturbations?${params}`);
  }

  async significance(
    request: SignificanceRequest,
  ): Promise<SignificanceReport> {
    const response = await this.fetchImpl(`${this.baseUrl}/significance`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) {
      const message =
        response.status === 409
          ? "metric missing in one run"
          : `significance request failed (${response.status})`;
      throw new ApiError(response.status, message);
    }
    return (await response.json()) as SignificanceReport;
  }
}
