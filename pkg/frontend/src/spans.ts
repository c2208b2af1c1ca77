// Splitting a hypothesis into renderable fragments from its error
// spans. Invariant: concatenating fragment texts reproduces the raw
// hypothesis exactly, so highlighting can never alter the displayed
// translation.

import type { ErrorSpan, Severity } from "./types.js";

export interface Fragment {
  text: string;
  severity: Severity | null;
}

export function hypothesisFragments(
  hypothesis: string,
  spans: ErrorSpan[] | undefined,
): Fragment[] {
  if (!spans || spans.length === 0) {
    return hypothesis ? [{ text: hypothesis, severity: null }] : [];
  }
  const ordered = [...spans].sort((a, b) => a.start - b.start || a.end - b.end);
  const fragments: Fragment[] = [];
  let cursor = 0;
  for (const span of ordered) {
    const start = Math.max(0, Math.min(span.start, hypothesis.length));
    const end = Math.max(start, Math.min(span.end, hypothesis.length));
    if (start > cursor) {
      fragments.push({ text: hypothesis.slice(cursor, start), severity: null });
    }
    if (end > Math.max(start, cursor)) {
      const from = Math.max(start, cursor);
      fragments.push({
        text: hypothesis.slice(from, end),
        severity: span.severity,
      });
      cursor = end;
    }
  }
  if (cursor < hypothesis.length) {
    fragments.push({ text: hypothesis.slice(cursor), severity: null });
  }
  return fragments.filter((f) => f.text.length > 0);
}

export function concatFragments(fragments: Fragment[]): string {
  return fragments.map((f) => f.text).join("");
}
