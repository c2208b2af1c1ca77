// Chart geometry helpers. Data in, plotted point coordinates out; the
// DOM layer only draws what comes back, so tests can assert that a
// chart contains exactly the sweep-table points.

import type { SweepSeries } from "./types.js";

export interface ChartPoint {
  x: number; // noise level
  y: number; // metric score
}

export interface ChartSeries {
  label: string;
  points: ChartPoint[];
}

export interface ChartLayout {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
  xDomain: [number, number];
  yDomain: [number, number];
}

export function seriesFromSweep(
  label: string,
  sweep: SweepSeries,
): ChartSeries {
  const points = sweep.level.map((level, i) => ({
    x: level,
    y: sweep.score[i] ?? 0,
  }));
  return { label, points };
}

export function chartLayout(
  series: ChartSeries[],
  width = 560,
  height = 320,
): ChartLayout {
  const ys = series.flatMap((s) => s.points.map((p) => p.y));
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const yMax = ys.length ? Math.max(...ys) : 1;
  const yMin = ys.length ? Math.min(...ys, 0) : 0;
  const xMax = xs.length ? Math.max(...xs, 1) : 1;
  return {
    width,
    height,
    margin: { top: 16, right: 16, bottom: 32, left: 44 },
    xDomain: [0, xMax],
    yDomain: [yMin, yMax === yMin ? yMin + 1 : yMax],
  };
}

export function project(
  point: ChartPoint,
  layout: ChartLayout,
): { px: number; py: number } {
  const { width, height, margin, xDomain, yDomain } = layout;
  const innerW = width - margin.left - margin.right;
  const innerH = height - margin.top - margin.bottom;
  const fx = (point.x - xDomain[0]) / (xDomain[1] - xDomain[0] || 1);
  const fy = (point.y - yDomain[0]) / (yDomain[1] - yDomain[0] || 1);
  return {
    px: margin.left + fx * innerW,
    py: margin.top + (1 - fy) * innerH,
  };
}

export function polylinePath(series: ChartSeries, layout: ChartLayout): string {
  return series.points
    .map((p, i) => {
      const { px, py } = project(p, layout);
      return `${i === 0 ? "M" : "L"}${px.toFixed(1)},${py.toFixed(1)}`;
    })
    .join(" ");
}

const SERIES_COLORS = [
  "#0072b2",
  "#d55e00",
  "#009e73",
  "#cc79a7",
  "#e69f00",
  "#56b4e9",
];

export function seriesColor(index: number): string {
  return SERIES_COLORS[index % SERIES_COLORS.length] ?? "#333333";
}
