// View state: run selection, active section, segment cursor, metric
// choice. Section navigation must preserve selections; the segment
// cursor stays inside run bounds; stale responses are dropped by
// request token.

export const SECTIONS = [
  "overview",
  "translation",
  "toxicity",
  "gender",
  "perturbations",
] as const;

export type Section = (typeof SECTIONS)[number];

export interface ViewState {
  section: Section;
  selectedRuns: string[];
  metric: string;
  cursor: number;
  totalSegments: number;
  pageOffset: number;
  pageLimit: number;
  palette: "default" | "colorblind";
}

export function initialState(): ViewState {
  return {
    section: "overview",
    selectedRuns: [],
    metric: "bleu",
    cursor: 0,
    totalSegments: 0,
    pageOffset: 0,
    pageLimit: 50,
    palette: "default",
  };
}

export function navigate(state: ViewState, section: Section): ViewState {
  // run selection and metric choice survive section changes
  return { ...state, section };
}

export function selectRuns(state: ViewState, runs: string[]): ViewState {
  return { ...state, selectedRuns: [...runs], cursor: 0 };
}

export function chooseMetric(state: ViewState, metric: string): ViewState {
  return { ...state, metric };
}

export function clampCursor(state: ViewState, cursor: number): ViewState {
  const bounded = Math.max(0, Math.min(cursor, Math.max(0, state.totalSegments - 1)));
  return { ...state, cursor: bounded };
}

export function setTotalSegments(state: ViewState, total: number): ViewState {
  const next = { ...state, totalSegments: total };
  return clampCursor(turnPage(next, 0), next.cursor);
}

export function turnPage(state: ViewState, delta: number): ViewState {
  const lastPageStart =
    Math.max(0, Math.ceil(state.totalSegments / state.pageLimit) - 1) *
    state.pageLimit;
  const target = state.pageOffset + delta * state.pageLimit;
  return { ...state, pageOffset: Math.max(0, Math.min(target, lastPageStart)) };
}

// Guard against out-of-order responses: only the latest token per
// channel may apply its result.
export class RequestTokens {
  private tokens = new Map<string, number>();

  issue(channel: string): number {
    const next = (this.tokens.get(channel) ?? 0) + 1;
    this.tokens.set(channel, next);
    return next;
  }

  isCurrent(channel: string, token: number): boolean {
    return this.tokens.get(channel) === token;
  }
}
