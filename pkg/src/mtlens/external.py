"""Adapters for scores produced by external (neural) metrics.

Score files are line-delimited JSON, UTF-8, LF: the first line is a
header record {metric, model_id, task, aggregation, corpus?,
corpus_only?}, each following line one segment record {id, value,
spans?}.  Spans are character offsets into the hypothesis with a
severity of minor, major, or critical.

Plugins are external commands speaking the same format: they read a
request stream (header {task, metric, model_id, n_segments} then one
{id, src, ref?, hyp} record per segment) on stdin and write a score
file on stdout.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from .errors import PluginCrash, PluginTimeout, SchemaError, SpanOutOfRange

SEVERITIES = ("minor", "major", "critical")
_SEVERITY_RANK = {s: i for i, s in enumerate(SEVERITIES)}

AGGREGATION_TOLERANCE = 1e-6
DEFAULT_PLUGIN_TIMEOUT = 3600.0


@dataclass(frozen=True)
class ErrorSpan:
    start: int
    end: int  # exclusive
    severity: str

    def __post_init__(self):
        if self.severity not in SEVERITIES:
            raise SchemaError(f"unknown severity {self.severity!r}")

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "severity": self.severity}

    @classmethod
    def from_dict(cls, d: dict) -> "ErrorSpan":
        try:
            return cls(int(d["start"]), int(d["end"]), d["severity"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad span record {d!r}") from exc


def normalize_spans(spans: list[ErrorSpan], hyp: str) -> list[ErrorSpan]:
    """Sorted, merged, validated spans.

    Overlapping spans collapse into one covering span carrying the most
    severe label.  Raises SpanOutOfRange for empty or out-of-bounds
    spans.  Idempotent.
    """
    for span in spans:
        if span.start < 0 or span.end > len(hyp) or span.start >= span.end:
            raise SpanOutOfRange(
                f"span ({span.start}, {span.end}) invalid for hypothesis of "
                f"length {len(hyp)}"
            )
    merged: list[ErrorSpan] = []
    for span in sorted(spans, key=lambda s: (s.start, s.end)):
        if merged and span.start < merged[-1].end:
            last = merged[-1]
            severity = max(
                last.severity, span.severity, key=_SEVERITY_RANK.__getitem__
            )
            merged[-1] = ErrorSpan(last.start, max(last.end, span.end), severity)
        else:
            merged.append(span)
    return merged


@dataclass
class ExternalScoreFile:
    metric: str
    model_id: str
    task: str
    aggregation: str = "mean"
    per_segment: list[tuple[str, float]] = field(default_factory=list)
    spans: dict[str, list[ErrorSpan]] = field(default_factory=dict)
    corpus: float | None = None
    corpus_only: bool = False

    def aggregate(self) -> float | None:
        if not self.per_segment:
            return self.corpus
        values = [v for _, v in self.per_segment]
        if self.aggregation == "mean":
            return sum(values) / len(values)
        if self.aggregation == "sum":
            return float(sum(values))
        raise SchemaError(f"unknown aggregation {self.aggregation!r}")


def _parse_header(line: str) -> dict:
    try:
        header = json.loads(line)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"header is not valid JSON: {exc}") from exc
    for key in ("metric", "model_id", "task"):
        if key not in header:
            raise SchemaError(f"header missing required field {key!r}")
    return header


def parse_score_stream(lines: list[str]) -> ExternalScoreFile:
    if not lines:
        raise SchemaError("empty score stream")
    header = _parse_header(lines[0])
    esf = ExternalScoreFile(
        metric=str(header["metric"]).lower(),
        model_id=str(header["model_id"]),
        task=str(header["task"]),
        aggregation=str(header.get("aggregation", "mean")),
        corpus=header.get("corpus"),
        corpus_only=bool(header.get("corpus_only", False)),
    )
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {lineno}: invalid JSON: {exc}") from exc
        if "id" not in record or "value" not in record:
            raise SchemaError(f"line {lineno}: record needs id and value")
        seg_id = str(record["id"])
        if seg_id in seen:
            raise SchemaError(f"line {lineno}: duplicate id {seg_id!r}")
        seen.add(seg_id)
        try:
            value = float(record["value"])
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"line {lineno}: non-numeric value") from exc
        esf.per_segment.append((seg_id, value))
        if record.get("spans"):
            esf.spans[seg_id] = [
                ErrorSpan.from_dict(s) for s in record["spans"]
            ]
    if esf.corpus_only and esf.per_segment:
        raise SchemaError("corpus_only file must not carry segment records")
    if not esf.corpus_only and not esf.per_segment:
        raise SchemaError("score file has no segment records")
    if esf.corpus is not None and esf.per_segment:
        expected = esf.aggregate()
        if abs(expected - esf.corpus) > AGGREGATION_TOLERANCE:
            raise SchemaError(
                f"declared corpus value {esf.corpus} differs from "
                f"{esf.aggregation} of segment values {expected}"
            )
    return esf


def read_score_file(path: Path | str) -> ExternalScoreFile:
    text = Path(path).read_bytes().decode("utf-8")
    return parse_score_stream(text.split("\n"))


def score_file_lines(esf: ExternalScoreFile) -> list[str]:
    header: dict = {
        "metric": esf.metric,
        "model_id": esf.model_id,
        "task": esf.task,
        "aggregation": esf.aggregation,
    }
    if esf.corpus is not None:
        header["corpus"] = esf.corpus
    if esf.corpus_only:
        header["corpus_only"] = True
    lines = [json.dumps(header, ensure_ascii=False)]
    for seg_id, value in esf.per_segment:
        record: dict = {"id": seg_id, "value": value}
        if seg_id in esf.spans:
            record["spans"] = [s.to_dict() for s in esf.spans[seg_id]]
        lines.append(json.dumps(record, ensure_ascii=False))
    return lines


def write_score_file(esf: ExternalScoreFile, path: Path | str) -> None:
    Path(path).write_text("\n".join(score_file_lines(esf)) + "\n", "utf-8")


def plugin_request_lines(
    task: str,
    metric: str,
    model_id: str,
    segments: list[dict],
) -> list[str]:
    lines = [
        json.dumps(
            {
                "task": task,
                "metric": metric,
                "model_id": model_id,
                "n_segments": len(segments),
            },
            ensure_ascii=False,
        )
    ]
    for seg in segments:
        record = {"id": seg["id"], "src": seg.get("src", ""), "hyp": seg["hyp"]}
        if seg.get("ref") is not None:
            record["ref"] = seg["ref"]
        lines.append(json.dumps(record, ensure_ascii=False))
    return lines


def run_plugin(
    cmd: list[str],
    segments: list[dict],
    task: str,
    metric: str,
    model_id: str,
    timeout: float = DEFAULT_PLUGIN_TIMEOUT,
) -> ExternalScoreFile:
    """Run an external scorer over the adapter protocol.

    The command inherits the environment; nonzero exit raises
    PluginCrash with captured stderr, exceeding ``timeout`` seconds
    raises PluginTimeout.
    """
    request = "\n".join(plugin_request_lines(task, metric, model_id, segments)) + "\n"
    try:
        proc = subprocess.run(
            cmd,
            input=request.encode("utf-8"),
            capture_output=True,
            timeout=timeout,
        )
    except subprocess.TimeoutExpired as exc:
        raise PluginTimeout(
            f"plugin {cmd[0]} exceeded {timeout} s"
        ) from exc
    stderr = proc.stderr.decode("utf-8", errors="replace")
    if proc.returncode != 0:
        raise PluginCrash(
            f"plugin {cmd[0]} exited {proc.returncode}", stderr=stderr
        )
    out = proc.stdout.decode("utf-8")
    return parse_score_stream(out.split("\n"))


def ingest_scores(path: Path | str, run, force: bool = False):
    """Attach a score file to a run (segment spans are normalized
    against each hypothesis at attach time)."""
    esf = read_score_file(path)
    run.attach_external_scores(esf, force=force)
    return esf
