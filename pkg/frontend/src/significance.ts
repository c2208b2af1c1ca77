// Significance panel: issue the comparison request, keep inputs on
// failure so the user can retry, and shape the response for display.

import { ApiClient, ApiError } from "./api.js";
import type { SignificanceReport, SignificanceRequest } from "./types.js";

export interface PanelDisplay {
  headline: string;
  delta: string;
  pValue: string;
  winFractions: string;
  verdict: "significant" | "not significant";
}

export function displayReport(report: SignificanceReport): PanelDisplay {
  const better = report.delta_mean >= 0 ? report.model_a : report.model_b;
  return {
    headline: `${report.model_a} vs ${report.model_b} on ${report.metric}`,
    delta: `Δ mean (${better} ahead): ${report.delta_mean.toFixed(4)}`,
    pValue: `p = ${report.p_value.toFixed(4)} (n = ${report.n_resamples})`,
    winFractions: `wins: ${report.model_a} ${(report.win_fraction_a * 100).toFixed(1)}% / ${report.model_b} ${(report.win_fraction_b * 100).toFixed(1)}%`,
    verdict: report.significant ? "significant" : "not significant",
  };
}

export interface PanelState {
  pending: boolean;
  request: SignificanceRequest | null;
  report: SignificanceReport | null;
  display: PanelDisplay | null;
  error: string | null;
  retryable: boolean;
}

export function emptyPanel(): PanelState {
  return {
    pending: false,
    request: null,
    report: null,
    display: null,
    error: null,
    retryable: false,
  };
}

export async function runComparison(
  api: ApiClient,
  request: SignificanceRequest,
): Promise<PanelState> {
  try {
    const report = await api.significance(request);
    return {
      pending: false,
      request,
      report,
      display: displayReport(report),
      error: null,
      retryable: false,
    };
  } catch (err) {
    const message =
      err instanceof ApiError ? err.message : "network failure, retry";
    return {
      pending: false,
      request, // inputs preserved for retry
      report: null,
      display: null,
      error: message,
      retryable: !(err instanceof ApiError && err.status === 409),
    };
  }
}
