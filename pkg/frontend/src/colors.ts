// Severity color mapping: critical errors red, major yellow, minor
// blue. A colorblind-safe alternative palette keeps the same ordering
// semantics (Okabe-Ito hues).

import type { Severity } from "./types.js";

export type Palette = "default" | "colorblind";

export const SEVERITY_COLORS: Record<Palette, Record<Severity, string>> = {
  default: {
    minor: "#1f77d0", // blue
    major: "#e6b800", // yellow
    critical: "#d62728", // red
  },
  colorblind: {
    minor: "#0072b2",
    major: "#e69f00",
    critical: "#cc79a7",
  },
};

export const SEVERITY_NAMES: Record<Severity, string> = {
  minor: "blue",
  major: "yellow",
  critical: "red",
};

export function colorFor(severity: Severity, palette: Palette = "default"): string {
  return SEVERITY_COLORS[palette][severity];
}
