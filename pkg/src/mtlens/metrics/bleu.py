"""BLEU with pooled sufficient statistics.

Corpus score: BP * exp(mean of log n-gram precisions), n = 1..4, with
clipped n-gram counts (per n-gram, the maximum count over references)
and the closest reference length per segment.  The corpus score is
unsmoothed; segment scores default to exponential smoothing with
effective n-gram order, which is what the standard scorers report for
single sentences.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .base import MetricScore, SegmentScores, check_batch
from .tokenizers import tokenize

MAX_ORDER = 4

SMOOTHERS = ("none", "exp", "floor", "add-k")
_SMOOTH_DEFAULTS = {"floor": 0.0, "add-k": 1.0}


@dataclass(frozen=True)
class BleuOptions:
    tokenizer: str = "international"
    lowercase: bool = False
    # Segment-level smoothing; corpus scores are never smoothed.
    smooth_method: str = "exp"
    smooth_value: float | None = None
    effective_order: bool = True

    def __post_init__(self):
        if self.smooth_method not in SMOOTHERS:
            raise ValueError(f"unknown smoothing {self.smooth_method!r}")


def _ngram_counts(tokens: list[str], max_order: int = MAX_ORDER) -> Counter:
    counts: Counter = Counter()
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


def segment_statistics(
    hyp_tokens: list[str], ref_token_lists: list[list[str]]
) -> list[int]:
    """[correct_1..4, total_1..4, hyp_len, closest_ref_len] for one pair."""
    hyp_len = len(hyp_tokens)
    closest_diff = None
    closest_len = 0
    clipped: Counter = Counter()
    for ref_tokens in ref_token_lists:
        diff = abs(hyp_len - len(ref_tokens))
        if closest_diff is None or diff < closest_diff:
            closest_diff = diff
            closest_len = len(ref_tokens)
        elif diff == closest_diff and len(ref_tokens) < closest_len:
            closest_len = len(ref_tokens)
        for ngram, count in _ngram_counts(ref_tokens).items():
            if count > clipped[ngram]:
                clipped[ngram] = count

    correct = [0] * MAX_ORDER
    total = [0] * MAX_ORDER
    for ngram, count in _ngram_counts(hyp_tokens).items():
        n = len(ngram)
        correct[n - 1] += min(count, clipped.get(ngram, 0))
        total[n - 1] += count
    return correct + total + [hyp_len, closest_len]


def score_from_statistics(
    stats: list[float],
    smooth_method: str = "none",
    smooth_value: float | None = None,
    effective_order: bool = False,
) -> MetricScore:
    """Compute BLEU from one (possibly pooled) statistics row."""
    if smooth_value is None:
        smooth_value = _SMOOTH_DEFAULTS.get(smooth_method, 0.0)
    correct = [float(c) for c in stats[:MAX_ORDER]]
    total = [float(t) for t in stats[MAX_ORDER : 2 * MAX_ORDER]]
    hyp_len = float(stats[2 * MAX_ORDER])
    ref_len = float(stats[2 * MAX_ORDER + 1])

    precisions = [0.0] * MAX_ORDER
    eff_order = MAX_ORDER
    exp_denominator = 1.0
    for n in range(1, MAX_ORDER + 1):
        if smooth_method == "add-k" and n > 1:
            correct[n - 1] += smooth_value
            total[n - 1] += smooth_value
        if total[n - 1] == 0:
            break
        if effective_order:
            eff_order = n
        if correct[n - 1] == 0:
            if smooth_method == "exp":
                exp_denominator *= 2
                precisions[n - 1] = 100.0 / (exp_denominator * total[n - 1])
            elif smooth_method == "floor":
                precisions[n - 1] = 100.0 * smooth_value / total[n - 1]
        else:
            precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1]

    if hyp_len == 0:
        bp = 0.0
    elif hyp_len < ref_len:
        bp = math.exp(1 - ref_len / hyp_len)
    else:
        bp = 1.0

    log_sum = 0.0
    zero_precision = False
    for p in precisions[:eff_order]:
        if p == 0.0:
            zero_precision = True
            break
        log_sum += math.log(p)
    value = 0.0 if zero_precision else bp * math.exp(log_sum / eff_order)

    return MetricScore(
        metric="bleu",
        value=value,
        details={
            "precisions": precisions,
            "bp": bp,
            "counts": stats[:MAX_ORDER],
            "totals": stats[MAX_ORDER : 2 * MAX_ORDER],
            "hyp_len": hyp_len,
            "ref_len": ref_len,
            "smooth_method": smooth_method,
            "effective_order": eff_order,
            "all_empty": hyp_len == 0,
        },
    )


def pool_statistics(rows: list[list[float]]) -> list[float]:
    pooled = [0.0] * (2 * MAX_ORDER + 2)
    for row in rows:
        for i, v in enumerate(row):
            pooled[i] += v
    return pooled


def bleu(
    hyps: list[str],
    refs: list[list[str]],
    opts: BleuOptions | None = None,
) -> SegmentScores:
    opts = opts or BleuOptions()
    check_batch(hyps, refs)

    def prep(text: str) -> list[str]:
        if opts.lowercase:
            text = text.lower()
        return tokenize(text.rstrip(), opts.tokenizer)

    rows = [
        segment_statistics(prep(h), [prep(r) for r in rlist])
        for h, rlist in zip(hyps, refs)
    ]
    per_segment = [
        score_from_statistics(
            row,
            smooth_method=opts.smooth_method,
            smooth_value=opts.smooth_value,
            effective_order=opts.effective_order,
        )
        for row in rows
    ]
    # Unsmoothed, but with effective order so that corpora whose longest
    # n-gram falls below 4 (single-word segments) keep the identity
    # property; any corpus containing a 4-gram scores identically to the
    # fixed-order formula.
    corpus = score_from_statistics(
        pool_statistics(rows), smooth_method="none", effective_order=True
    )
    return SegmentScores(
        metric="bleu",
        per_segment=per_segment,
        corpus=corpus,
        statistics=[[float(v) for v in row] for row in rows],
    )
