"""Paired bootstrap resampling between two systems.

Each resample draws segment indices with replacement (sample size =
corpus size) and applies the identical index multiset to both systems;
corpus scores are recomputed per resample from sufficient statistics
for the pooled metrics and from score means otherwise.  The index
stream for resample i comes from a generator keyed by (seed, i), so
resamples are reproducible independently of execution order.  Segments
are paired by id, in sorted-id order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, DegenerateInput, MetricMissing
from .registry import lookup
from .results import EvalRun, aggregate_from_rows

DEFAULT_RESAMPLES = 1000
DEFAULT_ALPHA = 0.05
DEFAULT_SEED = 42


@dataclass(frozen=True)
class SignificanceReport:
    metric: str
    model_a: str
    model_b: str
    n_resamples: int
    seed: int
    alpha: float
    corpus_a: float
    corpus_b: float
    delta_mean: float
    win_fraction_a: float
    win_fraction_b: float
    p_value: float
    significant: bool

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "model_a": self.model_a,
            "model_b": self.model_b,
            "n_resamples": self.n_resamples,
            "seed": self.seed,
            "alpha": self.alpha,
            "corpus_a": self.corpus_a,
            "corpus_b": self.corpus_b,
            "delta_mean": self.delta_mean,
            "win_fraction_a": self.win_fraction_a,
            "win_fraction_b": self.win_fraction_b,
            "p_value": self.p_value,
            "significant": self.significant,
        }


def paired_bootstrap(
    rows_a: list[list[float]],
    rows_b: list[list[float]],
    metric: str,
    n_resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_SEED,
    alpha: float = DEFAULT_ALPHA,
    model_a: str = "a",
    model_b: str = "b",
) -> SignificanceReport:
    """Run the test over aligned per-segment statistic rows.

    ``rows_*`` must be ordered identically (one row per segment);
    orientation comes from the metric registry, so delta_mean > 0
    always means system A is better.
    """
    if len(rows_a) != len(rows_b):
        raise AlignmentError(
            f"{len(rows_a)} vs {len(rows_b)} segment rows"
        )
    n = len(rows_a)
    if n < 2:
        raise DegenerateInput("need at least 2 segments to resample")
    if n_resamples < 1:
        raise DegenerateInput("need at least 1 resample")

    sign = -1.0 if lookup(metric).lower_better else 1.0
    wins_a = wins_b = 0
    delta_sum = 0.0
    for i in range(n_resamples):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        idx = rng.integers(0, n, size=n)
        score_a = sign * aggregate_from_rows(metric, [rows_a[j] for j in idx])
        score_b = sign * aggregate_from_rows(metric, [rows_b[j] for j in idx])
        delta_sum += score_a - score_b
        if score_a > score_b:
            wins_a += 1
        elif score_b > score_a:
            wins_b += 1

    win_fraction_a = wins_a / n_resamples
    win_fraction_b = wins_b / n_resamples
    p_value = max(
        1.0 - max(win_fraction_a, win_fraction_b), 1.0 / n_resamples
    )
    return SignificanceReport(
        metric=metric,
        model_a=model_a,
        model_b=model_b,
        n_resamples=n_resamples,
        seed=seed,
        alpha=alpha,
        corpus_a=aggregate_from_rows(metric, rows_a),
        corpus_b=aggregate_from_rows(metric, rows_b),
        delta_mean=delta_sum / n_resamples,
        win_fraction_a=win_fraction_a,
        win_fraction_b=win_fraction_b,
        p_value=p_value,
        significant=p_value < alpha,
    )


def compare_runs(
    run_a: EvalRun,
    run_b: EvalRun,
    metric: str,
    n_resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_SEED,
    alpha: float = DEFAULT_ALPHA,
) -> SignificanceReport:
    """Paired bootstrap between two persisted runs on a shared metric."""
    metric = metric.lower()
    for run, name in ((run_a, "run_a"), (run_b, "run_b")):
        if metric not in run.aggregates or metric in run.corpus_only_metrics:
            raise MetricMissing(
                f"{name} has no segment-level metric {metric!r}"
            )
    ids_a = sorted(run_a.ids())
    ids_b = sorted(run_b.ids())
    if ids_a != ids_b:
        raise AlignmentError("runs cover different segment id sets")
    return paired_bootstrap(
        run_a.statistic_rows(metric),
        run_b.statistic_rows(metric),
        metric,
        n_resamples=n_resamples,
        seed=seed,
        alpha=alpha,
        model_a=run_a.model_id,
        model_b=run_b.model_id,
    )
