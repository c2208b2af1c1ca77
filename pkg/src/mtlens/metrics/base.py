"""Score containers shared by the overlap metrics.

Corpus scores are always recomputed from pooled integer sufficient
statistics, never by averaging segment scores, so results are identical
regardless of segment order or parallel scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..errors import EmptyInput


@dataclass(frozen=True)
class MetricScore:
    """A single metric value with enough detail to recompute it."""

    metric: str
    value: float
    details: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class SegmentScores:
    """Per-segment scores plus the pooled corpus score."""

    metric: str
    per_segment: list[MetricScore]
    corpus: MetricScore
    # One row of integer/real sufficient statistics per segment, in the
    # same order as per_segment.  Pooling these and rescoring must
    # reproduce `corpus` exactly; significance resampling relies on it.
    statistics: list[list[float]] = field(default_factory=list)

    @property
    def values(self) -> list[float]:
        return [s.value for s in self.per_segment]


def check_batch(hyps: list[str], refs: list[list[str]]) -> None:
    if not hyps:
        raise EmptyInput("no hypotheses given")
    if len(hyps) != len(refs):
        raise EmptyInput(
            f"{len(hyps)} hypotheses vs {len(refs)} reference lists"
        )
    for i, rlist in enumerate(refs):
        if not rlist:
            raise EmptyInput(f"segment {i} has no references")
