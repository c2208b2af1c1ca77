"""Canonical run results: schema, persistence, and consistency checks.

One run = one system evaluated on one task, stored as a single JSON
document holding sources, references, hypotheses, per-segment scores
and sufficient statistics, aggregates, and any task-specific reports.
Unknown top-level and per-segment fields survive a load/save cycle.
Writes go to a temporary file in the target directory followed by an
atomic rename, so readers never observe a partial run.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import DuplicateMetric, IdMismatch, RunNotFound, SchemaError
from .metrics import SegmentScores
from .metrics.bleu import pool_statistics as _pool_bleu
from .metrics.bleu import score_from_statistics as _score_bleu
from .metrics.chrf import pool_statistics as _pool_chrf
from .metrics.chrf import score_from_statistics as _score_chrf
from .metrics.ter import pool_statistics as _pool_ter
from .metrics.ter import score_from_statistics as _score_ter
from .external import ErrorSpan, ExternalScoreFile, normalize_spans
from .registry import lookup

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CONSISTENCY_TOLERANCE = 1e-8

_POOLED_SCORERS = {
    "bleu": (_pool_bleu,
             lambda stats: _score_bleu(
                 stats, smooth_method="none", effective_order=True).value),
    "chrf": (_pool_chrf, lambda stats: _score_chrf(stats).value),
    "ter": (_pool_ter, lambda stats: _score_ter(stats).value),
}


def aggregate_from_rows(
    metric: str, rows: list[list[float]], options: dict | None = None
) -> float:
    """Corpus value from per-segment sufficient statistics or scores."""
    info = lookup(metric)
    if info.aggregation == "pooled":
        if metric == "chrf" and options and "beta" in options:
            return _score_chrf(
                _pool_chrf(rows), beta=float(options["beta"])
            ).value
        if metric not in _POOLED_SCORERS:
            raise SchemaError(f"no pooled scorer for metric {metric!r}")
        pool, score = _POOLED_SCORERS[metric]
        return score(pool(rows))
    values = [row[0] for row in rows]
    return sum(values) / len(values)


@dataclass
class SegmentRecord:
    id: str
    source: str
    references: list[str]
    hypothesis: str
    scores: dict[str, float] = field(default_factory=dict)
    statistics: dict[str, list[float]] = field(default_factory=dict)
    error_spans: list[ErrorSpan] = field(default_factory=list)
    error_spans_by_metric: dict[str, list[ErrorSpan]] = field(default_factory=dict)
    metadata: dict[str, str] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dict(self.extra)
        d.update(
            {
                "id": self.id,
                "source": self.source,
                "references": self.references,
                "hypothesis": self.hypothesis,
                "scores": self.scores,
            }
        )
        if self.statistics:
            d["statistics"] = self.statistics
        if self.error_spans:
            d["error_spans"] = [s.to_dict() for s in self.error_spans]
        if self.error_spans_by_metric:
            d["error_spans_by_metric"] = {
                m: [s.to_dict() for s in spans]
                for m, spans in self.error_spans_by_metric.items()
            }
        if self.metadata:
            d["metadata"] = self.metadata
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SegmentRecord":
        known = {
            "id", "source", "references", "hypothesis", "scores",
            "statistics", "error_spans", "error_spans_by_metric", "metadata",
        }
        return cls(
            id=str(d["id"]),
            source=d.get("source", ""),
            references=list(d.get("references", [])),
            hypothesis=d.get("hypothesis", ""),
            scores={k: float(v) for k, v in d.get("scores", {}).items()},
            statistics={
                k: [float(x) for x in v]
                for k, v in d.get("statistics", {}).items()
            },
            error_spans=[
                ErrorSpan.from_dict(s) for s in d.get("error_spans", [])
            ],
            error_spans_by_metric={
                m: [ErrorSpan.from_dict(s) for s in spans]
                for m, spans in d.get("error_spans_by_metric", {}).items()
            },
            metadata=dict(d.get("metadata", {})),
            extra={k: v for k, v in d.items() if k not in known},
        )


@dataclass
class EvalRun:
    task: str
    model_id: str
    config: dict = field(default_factory=dict)
    created_at: str = ""
    schema_version: int = SCHEMA_VERSION
    segments: list[SegmentRecord] = field(default_factory=list)
    aggregates: dict[str, float] = field(default_factory=dict)
    corpus_only_metrics: list[str] = field(default_factory=list)
    task_reports: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.created_at:
            self.created_at = (
                datetime.now(timezone.utc).isoformat(timespec="seconds")
            )

    # ------------------------------------------------------------------
    @property
    def run_hash(self) -> str:
        """Deterministic identity over (task, model_id, config)."""
        payload = json.dumps(
            {"task": self.task, "model_id": self.model_id, "config": self.config},
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]

    @property
    def metrics(self) -> list[str]:
        return sorted(self.aggregates)

    @property
    def segment_metrics(self) -> list[str]:
        return sorted(
            m for m in self.aggregates if m not in self.corpus_only_metrics
        )

    def ids(self) -> list[str]:
        return [s.id for s in self.segments]

    def segment_by_id(self, seg_id: str) -> SegmentRecord:
        for seg in self.segments:
            if seg.id == seg_id:
                return seg
        raise KeyError(seg_id)

    # ------------------------------------------------------------------
    def add_native_scores(self, metric: str, scored: SegmentScores) -> None:
        if metric in self.aggregates:
            raise DuplicateMetric(f"metric {metric!r} already in run")
        if len(scored.per_segment) != len(self.segments):
            raise IdMismatch(
                f"{len(scored.per_segment)} scores for "
                f"{len(self.segments)} segments"
            )
        for seg, score, stats in zip(
            self.segments, scored.per_segment, scored.statistics
        ):
            seg.scores[metric] = score.value
            seg.statistics[metric] = list(stats)
        self.aggregates[metric] = scored.corpus.value

    def attach_external_scores(
        self, esf: ExternalScoreFile, force: bool = False
    ) -> None:
        metric = esf.metric
        if metric in self.aggregates and not force:
            raise DuplicateMetric(
                f"metric {metric!r} already in run (use force to replace)"
            )
        if esf.corpus_only:
            if esf.corpus is None:
                raise SchemaError("corpus_only score file without corpus value")
            self.aggregates[metric] = float(esf.corpus)
            if metric not in self.corpus_only_metrics:
                self.corpus_only_metrics.append(metric)
            return
        run_ids = set(self.ids())
        file_ids = {seg_id for seg_id, _ in esf.per_segment}
        if run_ids != file_ids:
            missing = sorted(run_ids - file_ids)[:5]
            unknown = sorted(file_ids - run_ids)[:5]
            raise IdMismatch(
                f"score file ids do not match run ids "
                f"(missing {missing}, unknown {unknown})"
            )
        values = dict(esf.per_segment)
        for seg in self.segments:
            seg.scores[metric] = values[seg.id]
            had_spans = seg.error_spans_by_metric.pop(metric, None) is not None
            if seg.id in esf.spans:
                seg.error_spans_by_metric[metric] = normalize_spans(
                    esf.spans[seg.id], seg.hypothesis
                )
            if had_spans or seg.id in esf.spans:
                merged = [
                    s
                    for spans_ in seg.error_spans_by_metric.values()
                    for s in spans_
                ]
                seg.error_spans = normalize_spans(merged, seg.hypothesis)
        self.aggregates[metric] = esf.aggregate()
        if force and metric in self.corpus_only_metrics:
            self.corpus_only_metrics.remove(metric)

    def export_external_scores(self, metric: str) -> ExternalScoreFile:
        if metric not in self.aggregates:
            raise KeyError(metric)
        pooled = lookup(metric).aggregation == "pooled"
        esf = ExternalScoreFile(
            metric=metric,
            model_id=self.model_id,
            task=self.task,
            aggregation="mean",
            # pooled aggregates are not the mean of segment scores, so a
            # declared corpus value would fail re-validation on read
            corpus=None if pooled else self.aggregates[metric],
        )
        for seg in self.segments:
            if metric in seg.scores:
                esf.per_segment.append((seg.id, seg.scores[metric]))
            if metric in seg.error_spans_by_metric:
                esf.spans[seg.id] = list(seg.error_spans_by_metric[metric])
        if not esf.per_segment:
            esf.corpus_only = True
        return esf

    # ------------------------------------------------------------------
    def statistic_rows(self, metric: str) -> list[list[float]]:
        """Per-segment rows for resampling: sufficient statistics for
        pooled metrics, otherwise single-element score rows.  Rows are
        ordered by segment id so pairing is stable under reordering."""
        ordered = sorted(self.segments, key=lambda s: s.id)
        rows = []
        for seg in ordered:
            if metric in seg.statistics:
                rows.append(list(seg.statistics[metric]))
            elif metric in seg.scores:
                rows.append([seg.scores[metric]])
            else:
                raise KeyError(metric)
        return rows

    def metric_options(self, metric: str) -> dict:
        for entry in self.config.get("metrics", []):
            if isinstance(entry, dict) and entry.get("name") == metric:
                return dict(entry.get("options", {}))
        return {}

    def recompute_aggregates(self) -> dict[str, float]:
        out = {}
        for metric in self.aggregates:
            if metric in self.corpus_only_metrics:
                out[metric] = self.aggregates[metric]
                continue
            out[metric] = aggregate_from_rows(
                metric, self.statistic_rows(metric), self.metric_options(metric)
            )
        return out

    def check_consistency(self) -> list[str]:
        """Metrics whose stored aggregate drifts from recomputation."""
        drifted = []
        recomputed = self.recompute_aggregates()
        for metric, value in recomputed.items():
            if abs(value - self.aggregates[metric]) > CONSISTENCY_TOLERANCE:
                drifted.append(metric)
        return drifted

    # ------------------------------------------------------------------
    def to_dict(self) -> dict:
        d = dict(self.extra)
        d.update(
            {
                "schema_version": self.schema_version,
                "run_hash": self.run_hash,
                "created_at": self.created_at,
                "task": self.task,
                "model_id": self.model_id,
                "config": self.config,
                "aggregates": self.aggregates,
                "corpus_only_metrics": self.corpus_only_metrics,
                "segments": [s.to_dict() for s in self.segments],
                "task_reports": self.task_reports,
            }
        )
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EvalRun":
        known = {
            "schema_version", "run_hash", "created_at", "task", "model_id",
            "config", "aggregates", "corpus_only_metrics", "segments",
            "task_reports",
        }
        if "schema_version" not in d:
            raise SchemaError("run file has no schema_version")
        return cls(
            task=d["task"],
            model_id=d["model_id"],
            config=d.get("config", {}),
            created_at=d.get("created_at", ""),
            schema_version=int(d["schema_version"]),
            segments=[SegmentRecord.from_dict(s) for s in d.get("segments", [])],
            aggregates={
                k: float(v) for k, v in d.get("aggregates", {}).items()
            },
            corpus_only_metrics=list(d.get("corpus_only_metrics", [])),
            task_reports=d.get("task_reports", {}),
            extra={k: v for k, v in d.items() if k not in known},
        )


def save_run(run: EvalRun, path: Path | str) -> Path:
    """Serialize atomically: write a temp file next to the target, then
    rename.  A crash mid-write leaves no partial file at ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(run.to_dict(), ensure_ascii=False, indent=1)
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent, prefix=".tmp-", suffix=".json"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(payload)
            f.write("\n")
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise
    return path


def load_run(path: Path | str, check: bool = True) -> EvalRun:
    path = Path(path)
    if not path.is_file():
        raise RunNotFound(str(path))
    run = EvalRun.from_dict(json.loads(path.read_text("utf-8")))
    if check:
        drifted = run.check_consistency()
        if drifted:
            logger.warning(
                "run %s: stored aggregates drift from recomputation for %s",
                path.name,
                ", ".join(drifted),
            )
            run.extra.setdefault("consistency_warnings", sorted(drifted))
    return run


def allocate_run_path(run: EvalRun, runs_dir: Path | str) -> Path:
    """Unique file name: content hash + timestamp, with a numeric
    suffix if that very second already produced one."""
    runs_dir = Path(runs_dir)
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    base = f"{run.run_hash}-{stamp}"
    candidate = runs_dir / f"{base}.json"
    counter = 1
    while candidate.exists():
        candidate = runs_dir / f"{base}-{counter}.json"
        counter += 1
    return candidate
