"""Shared token matching for word-list and term-pair evaluators.

Matching tokenization: casefold, split on whitespace, strip
punctuation from token edges.  Punctuation acts as an adjacency
barrier so multi-word terms never match across a comma or clause
boundary; a term also never matches inside a longer word.
"""

from __future__ import annotations

import sys
import unicodedata
from functools import lru_cache

BARRIER = None  # sentinel between non-adjacent tokens


@lru_cache(maxsize=1)
def _punct() -> frozenset:
    return frozenset(
        chr(cp)
        for cp in range(sys.maxunicode)
        if unicodedata.category(chr(cp)).startswith("P")
    )


def match_tokens(text: str) -> list[str | None]:
    """Casefolded tokens with BARRIER entries where punctuation broke
    adjacency."""
    punct = _punct()
    stream: list[str | None] = []
    for raw in text.casefold().split():
        start = 0
        end = len(raw)
        while start < end and raw[start] in punct:
            start += 1
        while end > start and raw[end - 1] in punct:
            end -= 1
        core = raw[start:end]
        if not core:
            if stream and stream[-1] is not BARRIER:
                stream.append(BARRIER)
            continue
        if start > 0 and stream and stream[-1] is not BARRIER:
            stream.append(BARRIER)
        stream.append(core)
        if end < len(raw):
            stream.append(BARRIER)
    if stream and stream[-1] is BARRIER:
        stream.pop()
    return stream


def term_tokens(term: str) -> list[str]:
    """Tokenize a lexicon/term entry the same way, dropping barriers."""
    return [t for t in match_tokens(term) if t is not BARRIER]


def find_occurrences(
    stream: list[str | None], term: list[str]
) -> list[tuple[int, ...]]:
    """Start-index tuples of every contiguous, barrier-free occurrence
    of ``term`` in the token stream."""
    if not term:
        return []
    n = len(term)
    hits = []
    for i in range(len(stream) - n + 1):
        if stream[i : i + n] == term:
            hits.append(tuple(range(i, i + n)))
    return hits
