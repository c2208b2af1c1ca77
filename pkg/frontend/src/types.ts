// Payload shapes served by the results API. The UI never computes
// metric values itself; everything rendered traces back to one of
// these fields.

export type Severity = "minor" | "major" | "critical";

export interface ErrorSpan {
  start: number;
  end: number; // exclusive
  severity: Severity;
}

export interface RunSummary {
  id: string;
  run_hash: string;
  task: string;
  model_id: string;
  created_at: string;
  n_segments: number;
  metrics: string[];
  segment_metrics: string[];
  corpus_only_metrics: string[];
  aggregates: Record<string, number>;
  lower_better: Record<string, boolean>;
  task_reports: string[];
}

export interface RunDetail extends RunSummary {
  config: Record<string, unknown>;
  reports: Record<string, unknown>;
}

export interface SegmentRecord {
  id: string;
  source: string;
  references: string[];
  hypothesis: string;
  scores: Record<string, number>;
  error_spans?: ErrorSpan[];
  metadata?: Record<string, string>;
}

export interface SegmentPage {
  total: number;
  offset: number;
  limit: number;
  segments: SegmentRecord[];
}

export interface LengthPoint {
  words: number;
  score: number;
  id: string;
}

export interface LengthBreakdown {
  metric: string;
  points: LengthPoint[];
  buckets: { label: string; n: number; mean: number | null }[];
}

export interface SignificanceRequest {
  run_a: string;
  run_b: string;
  metric: string;
  n?: number;
  seed?: number;
  alpha?: number;
}

export interface SignificanceReport {
  metric: string;
  model_a: string;
  model_b: string;
  n_resamples: number;
  seed: number;
  alpha: number;
  corpus_a: number;
  corpus_b: number;
  delta_mean: number;
  win_fraction_a: number;
  win_fraction_b: number;
  p_value: number;
  significant: boolean;
  run_a: string;
  run_b: string;
}

export interface SweepSeries {
  level: number[];
  score: number[];
}

export interface PerturbationModelReport {
  run_id: string;
  metrics: string[];
  baseline: Record<string, number> | null;
  rows: { kind: string; level: number; scores: Record<string, number> }[];
  series: Record<string, Record<string, SweepSeries>>;
}

export interface PerturbationsResponse {
  task: string;
  models: Record<string, PerturbationModelReport>;
}

export interface ToxicityReport {
  n_segments_total: number;
  n_source_toxic_excluded: number;
  n_evaluated: number;
  n_added_toxic: number;
  overall_rate: number;
  per_axis: Record<
    string,
    { n_segments: number; n_added_toxic: number; rate: number }
  >;
  per_classifier: Record<
    string,
    { n_flagged: number; mean_qe_flagged: number | null }
  >;
  qe_metric: string;
  mean_qe_flagged: number | null;
  flagged: {
    segment_id: string;
    axis: string;
    matched_terms: string[];
    classifier_scores: Record<string, number>;
    qe_score: number | null;
  }[];
}
