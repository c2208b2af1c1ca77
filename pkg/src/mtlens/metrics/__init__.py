"""Native overlap metrics: BLEU, ChrF, TER, and the tokenizer they share."""

from .base import MetricScore, SegmentScores
from .bleu import BleuOptions, bleu
from .chrf import ChrfOptions, chrf
from .ter import TerOptions, ter
from .tokenizers import tokenize

__all__ = [
    "MetricScore",
    "SegmentScores",
    "BleuOptions",
    "bleu",
    "ChrfOptions",
    "chrf",
    "TerOptions",
    "ter",
    "tokenize",
    "compute",
]

_NATIVE = {
    "bleu": (bleu, BleuOptions),
    "chrf": (chrf, ChrfOptions),
    "ter": (ter, TerOptions),
}


def compute(
    name: str,
    hyps: list[str],
    refs: list[list[str]],
    options: dict | None = None,
) -> SegmentScores:
    """Score a batch with a native metric selected by name."""
    key = name.lower()
    if key not in _NATIVE:
        raise ValueError(
            f"{name!r} is not a native metric (native: {sorted(_NATIVE)})"
        )
    fn, opts_cls = _NATIVE[key]
    return fn(hyps, refs, opts_cls(**(options or {})))
