"""Character n-gram F-score.

Defaults: character order 6, word order 0, beta 2.  Whitespace is
removed before character n-grams are extracted, so n-grams may span
what used to be word boundaries.  Precision and recall are averaged
over the n-gram orders that occur on both sides, then combined once
into F_beta; the result is reported on a 0-100 scale.

With several references, each segment is scored against the reference
that maximizes its F-score, and that reference's statistics are pooled
into the corpus score.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .base import MetricScore, SegmentScores, check_batch

_WS = re.compile(r"\s+")


@dataclass(frozen=True)
class ChrfOptions:
    char_order: int = 6
    word_order: int = 0
    beta: float = 2.0
    lowercase: bool = False

    @property
    def n_orders(self) -> int:
        return self.char_order + self.word_order


def _char_ngrams(text: str, n: int) -> Counter:
    return Counter(text[i : i + n] for i in range(len(text) - n + 1))


def _word_ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(
        tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
    )


def segment_statistics(
    hyp: str, ref: str, opts: ChrfOptions
) -> list[int]:
    """[hyp_count, ref_count, match_count] per order, flattened."""
    if opts.lowercase:
        hyp, ref = hyp.lower(), ref.lower()
    hyp_chars = _WS.sub("", hyp)
    ref_chars = _WS.sub("", ref)
    stats: list[int] = []
    for n in range(1, opts.char_order + 1):
        h = _char_ngrams(hyp_chars, n)
        r = _char_ngrams(ref_chars, n)
        common = h & r
        stats += [sum(h.values()), sum(r.values()), sum(common.values())]
    if opts.word_order:
        hyp_words = hyp.split()
        ref_words = ref.split()
        for n in range(1, opts.word_order + 1):
            h = _word_ngrams(hyp_words, n)
            r = _word_ngrams(ref_words, n)
            common = h & r
            stats += [sum(h.values()), sum(r.values()), sum(common.values())]
    return stats


def score_from_statistics(
    stats: list[float], beta: float = 2.0
) -> MetricScore:
    avg_precision = 0.0
    avg_recall = 0.0
    effective_orders = 0
    for i in range(0, len(stats), 3):
        hyp_count, ref_count, match = stats[i : i + 3]
        if hyp_count > 0 and ref_count > 0:
            avg_precision += match / hyp_count
            avg_recall += match / ref_count
            effective_orders += 1
    if effective_orders:
        avg_precision /= effective_orders
        avg_recall /= effective_orders
    if avg_precision + avg_recall == 0:
        value = 0.0
    else:
        b2 = beta * beta
        value = (
            100.0
            * (1 + b2)
            * avg_precision
            * avg_recall
            / (b2 * avg_precision + avg_recall)
        )
    return MetricScore(
        metric="chrf",
        value=value,
        details={
            "avg_precision": avg_precision,
            "avg_recall": avg_recall,
            "effective_orders": effective_orders,
            "beta": beta,
        },
    )


def pool_statistics(rows: list[list[float]]) -> list[float]:
    if not rows:
        return []
    pooled = [0.0] * len(rows[0])
    for row in rows:
        for i, v in enumerate(row):
            pooled[i] += v
    return pooled


def chrf(
    hyps: list[str],
    refs: list[list[str]],
    opts: ChrfOptions | None = None,
) -> SegmentScores:
    opts = opts or ChrfOptions()
    check_batch(hyps, refs)

    rows: list[list[int]] = []
    per_segment: list[MetricScore] = []
    for hyp, rlist in zip(hyps, refs):
        best_stats = None
        best_score = None
        for ref in rlist:
            stats = segment_statistics(hyp, ref, opts)
            score = score_from_statistics(stats, beta=opts.beta)
            if best_score is None or score.value > best_score.value:
                best_stats, best_score = stats, score
        rows.append(best_stats)
        per_segment.append(best_score)

    corpus = score_from_statistics(pool_statistics(rows), beta=opts.beta)
    return SegmentScores(
        metric="chrf",
        per_segment=per_segment,
        corpus=corpus,
        statistics=[[float(v) for v in row] for row in rows],
    )
