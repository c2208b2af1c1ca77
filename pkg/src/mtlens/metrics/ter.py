"""Translation edit rate with block shifts.

TER counts the minimum number of edits (insertions, deletions,
substitutions, and shifts of contiguous word blocks, each costing 1)
needed to turn the hypothesis into a reference, normalized by the mean
reference length in words, times 100.  Shift search is the greedy
best-shift loop of the original method: repeatedly apply the single
shift that most reduces the remaining word edit distance, stop when no
shift improves it.  Only blocks that occur verbatim in the reference
are candidates; block size is capped at 10 and shift distance at 50.

Defaults keep case and punctuation; flags expose lowercasing,
punctuation-splitting normalization, and punctuation removal.
"""

from __future__ import annotations

import re
import sys
import unicodedata
from dataclasses import dataclass
from functools import lru_cache

from .base import MetricScore, SegmentScores, check_batch

MAX_SHIFT_SIZE = 10
MAX_SHIFT_DIST = 50


@dataclass(frozen=True)
class TerOptions:
    lowercase: bool = False
    normalized: bool = False
    no_punct: bool = False


@lru_cache(maxsize=1)
def _punct_chars() -> str:
    return "".join(
        chr(cp)
        for cp in range(sys.maxunicode)
        if unicodedata.category(chr(cp)).startswith("P")
    )


@lru_cache(maxsize=4)
def _punct_re(mode: str) -> re.Pattern:
    chars = re.escape(_punct_chars())
    if mode == "split":
        return re.compile(f"([{chars}])")
    return re.compile(f"[{chars}]")


def _prepare(text: str, opts: TerOptions) -> list[str]:
    if opts.lowercase:
        text = text.lower()
    if opts.normalized:
        text = _punct_re("split").sub(r" \1 ", text)
    if opts.no_punct:
        text = _punct_re("drop").sub("", text)
    return text.split()


def word_edit_distance(hyp: list[str], ref: list[str]) -> int:
    """Plain word-level Levenshtein distance (all edits cost 1)."""
    if not hyp:
        return len(ref)
    if not ref:
        return len(hyp)
    previous = list(range(len(ref) + 1))
    for i, h_word in enumerate(hyp, start=1):
        current = [i] + [0] * len(ref)
        for j, r_word in enumerate(ref, start=1):
            cost = 0 if h_word == r_word else 1
            current[j] = min(
                previous[j] + 1,        # delete from hyp
                current[j - 1] + 1,     # insert from ref
                previous[j - 1] + cost  # substitute / match
            )
        previous = current
    return previous[-1]


def _ref_block_index(ref: list[str]) -> set[tuple[str, ...]]:
    blocks: set[tuple[str, ...]] = set()
    max_len = min(MAX_SHIFT_SIZE, len(ref))
    for start in range(len(ref)):
        for length in range(1, max_len + 1):
            if start + length > len(ref):
                break
            blocks.add(tuple(ref[start : start + length]))
    return blocks


def _best_shift(
    hyp: list[str], ref: list[str], current: int,
    blocks: set[tuple[str, ...]],
) -> tuple[list[str], int] | None:
    """The single shifted hypothesis with the lowest edit distance, if
    any shift strictly reduces it.  Ties keep the first candidate in
    scan order (start, length, target position ascending)."""
    best_hyp = None
    best_dist = current
    n = len(hyp)
    for start in range(n):
        for length in range(1, min(MAX_SHIFT_SIZE, n - start) + 1):
            block = tuple(hyp[start : start + length])
            if block not in blocks:
                # every extension of a non-matching block is non-matching
                break
            rest = hyp[:start] + hyp[start + length :]
            for target in range(len(rest) + 1):
                if target == start:
                    continue
                if abs(target - start) > MAX_SHIFT_DIST:
                    continue
                candidate = rest[:target] + list(block) + rest[target:]
                dist = word_edit_distance(candidate, ref)
                if dist < best_dist:
                    best_dist = dist
                    best_hyp = candidate
    if best_hyp is None:
        return None
    return best_hyp, best_dist


def total_edits(hyp: list[str], ref: list[str]) -> int:
    """Shifts + remaining word edits after the greedy shift loop."""
    distance = word_edit_distance(hyp, ref)
    if distance == 0:
        return 0
    blocks = _ref_block_index(ref)
    shifts = 0
    working = hyp
    while distance > 0:
        found = _best_shift(working, ref, distance, blocks)
        if found is None:
            break
        working, distance = found
        shifts += 1
    return shifts + distance


def segment_statistics(
    hyp_words: list[str], ref_word_lists: list[list[str]]
) -> list[float]:
    """[min_edits, mean_ref_len, hyp_len] for one segment."""
    edits = min(total_edits(hyp_words, ref) for ref in ref_word_lists)
    mean_ref_len = sum(len(r) for r in ref_word_lists) / len(ref_word_lists)
    return [float(edits), mean_ref_len, float(len(hyp_words))]


def score_from_statistics(stats: list[float]) -> MetricScore:
    edits, ref_len, hyp_len = stats
    if ref_len > 0:
        value = 100.0 * edits / ref_len
    elif hyp_len > 0:
        value = 100.0
    else:
        value = 0.0
    return MetricScore(
        metric="ter",
        value=value,
        details={"edits": edits, "ref_len": ref_len, "hyp_len": hyp_len},
    )


def pool_statistics(rows: list[list[float]]) -> list[float]:
    pooled = [0.0, 0.0, 0.0]
    for row in rows:
        pooled[0] += row[0]
        pooled[1] += row[1]
        pooled[2] += row[2]
    return pooled


def ter(
    hyps: list[str],
    refs: list[list[str]],
    opts: TerOptions | None = None,
) -> SegmentScores:
    opts = opts or TerOptions()
    check_batch(hyps, refs)
    rows = [
        segment_statistics(_prepare(h, opts), [_prepare(r, opts) for r in rlist])
        for h, rlist in zip(hyps, refs)
    ]
    per_segment = [score_from_statistics(row) for row in rows]
    corpus = score_from_statistics(pool_statistics(rows))
    return SegmentScores(
        metric="ter", per_segment=per_segment, corpus=corpus, statistics=rows
    )
