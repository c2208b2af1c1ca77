"""Static metric registry: orientation, scale, aggregation rule, and
whether the metric is computed natively or ingested from outside.

Shared by significance testing, the results schema, and the dashboard
so that "better" always means the same direction everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MetricInfo:
    name: str
    lower_better: bool = False
    # (min, max); None = unbounded on that side
    scale: tuple[float | None, float | None] = (None, None)
    # "pooled": corpus value recomputed from per-segment sufficient
    # statistics; "mean": arithmetic mean of segment scores.
    aggregation: str = "mean"
    native: bool = False
    spans: bool = False

    @property
    def orientation(self) -> int:
        return -1 if self.lower_better else 1


REGISTRY: dict[str, MetricInfo] = {
    m.name: m
    for m in [
        MetricInfo("bleu", scale=(0, 100), aggregation="pooled", native=True),
        MetricInfo("chrf", scale=(0, 100), aggregation="pooled", native=True),
        MetricInfo("ter", lower_better=True, scale=(0, None),
                   aggregation="pooled", native=True),
        MetricInfo("comet", scale=(0, 1)),
        MetricInfo("comet-kiwi", scale=(0, 1)),
        MetricInfo("bleurt", scale=(0, 1)),
        MetricInfo("metricx", lower_better=True, scale=(0, 25)),
        MetricInfo("metricx-qe", lower_better=True, scale=(0, 25)),
        MetricInfo("xcomet", scale=(0, 1), spans=True),
        MetricInfo("xcomet-qe", scale=(0, 1), spans=True),
        MetricInfo("mutox", scale=(0, 1)),
        MetricInfo("detoxify", scale=(0, 1)),
    ]
}

NATIVE_METRICS = tuple(m for m, info in REGISTRY.items() if info.native)


def lookup(name: str) -> MetricInfo:
    """Known entry, or a generic higher-better mean-aggregated one for
    metrics we have never heard of."""
    return REGISTRY.get(name.lower(), MetricInfo(name.lower()))
