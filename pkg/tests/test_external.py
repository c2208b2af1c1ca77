import json
import sys

import pytest

from mtlens.errors import (
    DuplicateMetric,
    IdMismatch,
    PluginCrash,
    PluginTimeout,
    SchemaError,
    SpanOutOfRange,
)
from mtlens.external import (
    ErrorSpan,
    ExternalScoreFile,
    ingest_scores,
    normalize_spans,
    read_score_file,
    run_plugin,
    score_file_lines,
    write_score_file,
)
from mtlens.results import EvalRun, SegmentRecord


def make_run(ids=("1", "2", "3")):
    return EvalRun(
        task="en_ca_flores_dev",
        model_id="sys-a",
        segments=[
            SegmentRecord(
                id=i, source=f"s{i}", references=[f"r{i}"], hypothesis=f"hyp {i}"
            )
            for i in ids
        ],
    )


def score_lines(metric="comet", ids=("1", "2", "3"), values=None, **header):
    values = values or [0.5] * len(ids)
    head = {"metric": metric, "model_id": "sys-a", "task": "en_ca_flores_dev"}
    head.update(header)
    lines = [json.dumps(head)]
    for i, v in zip(ids, values):
        lines.append(json.dumps({"id": i, "value": v}))
    return lines


class TestNormalizeSpans:
    def test_overlap_merges_to_higher_severity(self):
        spans = [ErrorSpan(0, 4, "major"), ErrorSpan(2, 6, "critical")]
        assert normalize_spans(spans, "abcdefgh") == [ErrorSpan(0, 6, "critical")]

    def test_empty_list(self):
        assert normalize_spans([], "abc") == []

    def test_empty_span_rejected(self):
        with pytest.raises(SpanOutOfRange):
            normalize_spans([ErrorSpan(3, 3, "minor")], "abcdef")

    def test_out_of_bounds_rejected(self):
        with pytest.raises(SpanOutOfRange):
            normalize_spans([ErrorSpan(0, 10, "minor")], "abc")
        with pytest.raises(SpanOutOfRange):
            normalize_spans([ErrorSpan(-1, 2, "minor")], "abc")

    def test_adjacent_spans_not_merged(self):
        spans = [ErrorSpan(0, 2, "minor"), ErrorSpan(2, 4, "major")]
        assert normalize_spans(spans, "abcd") == spans

    def test_idempotent(self):
        spans = [
            ErrorSpan(5, 9, "minor"),
            ErrorSpan(0, 4, "major"),
            ErrorSpan(2, 6, "critical"),
        ]
        once = normalize_spans(spans, "x" * 12)
        assert normalize_spans(once, "x" * 12) == once

    def test_unknown_severity(self):
        with pytest.raises(SchemaError):
            ErrorSpan(0, 1, "catastrophic")


class TestScoreFiles:
    def test_round_trip(self, tmp_path):
        esf = ExternalScoreFile(
            metric="xcomet",
            model_id="sys-a",
            task="en_ca_flores_dev",
            per_segment=[("1", 0.9), ("2", 0.4)],
            spans={"2": [ErrorSpan(0, 3, "critical")]},
            corpus=0.65,
        )
        path = tmp_path / "scores.jsonl"
        write_score_file(esf, path)
        loaded = read_score_file(path)
        assert score_file_lines(loaded) == score_file_lines(esf)

    def test_missing_header_field(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps({"metric": "comet"}) + "\n", "utf-8")
        with pytest.raises(SchemaError):
            read_score_file(path)

    def test_aggregation_mismatch(self, tmp_path):
        lines = score_lines(values=[0.7, 0.7, 0.8], corpus=0.80)
        path = tmp_path / "bad.jsonl"
        path.write_text("\n".join(lines) + "\n", "utf-8")
        with pytest.raises(SchemaError, match="corpus"):
            read_score_file(path)

    def test_declared_corpus_within_tolerance_ok(self, tmp_path):
        lines = score_lines(values=[0.7, 0.7, 0.7], corpus=0.7)
        path = tmp_path / "ok.jsonl"
        path.write_text("\n".join(lines) + "\n", "utf-8")
        assert read_score_file(path).corpus == 0.7

    def test_duplicate_id_rejected(self, tmp_path):
        lines = score_lines(ids=("1", "1", "2"))
        path = tmp_path / "dup.jsonl"
        path.write_text("\n".join(lines) + "\n", "utf-8")
        with pytest.raises(SchemaError, match="duplicate"):
            read_score_file(path)


class TestIngest:
    def write(self, tmp_path, lines, name="scores.jsonl"):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", "utf-8")
        return path

    def test_matching_ids_attach(self, tmp_path):
        run = make_run()
        path = self.write(tmp_path, score_lines(values=[0.1, 0.2, 0.3]))
        ingest_scores(path, run)
        assert run.aggregates["comet"] == pytest.approx(0.2)
        assert run.segments[0].scores["comet"] == 0.1

    def test_missing_segment_rejected(self, tmp_path):
        run = make_run()
        path = self.write(tmp_path, score_lines(ids=("1", "2")))
        with pytest.raises(IdMismatch):
            ingest_scores(path, run)
        assert "comet" not in run.aggregates

    def test_duplicate_metric_needs_force(self, tmp_path):
        run = make_run()
        path = self.write(tmp_path, score_lines())
        ingest_scores(path, run)
        with pytest.raises(DuplicateMetric):
            ingest_scores(path, run)
        ingest_scores(path, run, force=True)

    def test_spans_normalized_on_attach(self, tmp_path):
        run = make_run()
        lines = [
            json.dumps(
                {"metric": "xcomet", "model_id": "m", "task": "t"}
            ),
            json.dumps({"id": "1", "value": 0.5,
                        "spans": [{"start": 0, "end": 2, "severity": "minor"},
                                   {"start": 1, "end": 5, "severity": "critical"}]}),
            json.dumps({"id": "2", "value": 0.5}),
            json.dumps({"id": "3", "value": 0.5}),
        ]
        path = self.write(tmp_path, lines)
        ingest_scores(path, run)
        assert run.segments[0].error_spans == [ErrorSpan(0, 5, "critical")]

    def test_corpus_only_flagged(self, tmp_path):
        run = make_run()
        path = self.write(
            tmp_path,
            [json.dumps({"metric": "comet", "model_id": "m", "task": "t",
                         "corpus": 0.8, "corpus_only": True})],
        )
        ingest_scores(path, run)
        assert run.aggregates["comet"] == 0.8
        assert "comet" in run.corpus_only_metrics

    def test_export_round_trips_ingested_file(self, tmp_path):
        run = make_run()
        lines = score_lines(metric="bleurt", values=[0.25, 0.5, 0.75], corpus=0.5)
        path = self.write(tmp_path, lines)
        ingest_scores(path, run)
        exported = run.export_external_scores("bleurt")
        assert dict(exported.per_segment) == {"1": 0.25, "2": 0.5, "3": 0.75}
        assert exported.corpus == pytest.approx(0.5)

    def test_exported_file_is_readable_again(self, tmp_path):
        run = make_run()
        path = self.write(tmp_path, score_lines(values=[0.2, 0.4, 0.6]))
        ingest_scores(path, run)
        out = tmp_path / "exported.jsonl"
        write_score_file(run.export_external_scores("comet"), out)
        again = read_score_file(out)
        assert dict(again.per_segment) == {"1": 0.2, "2": 0.4, "3": 0.6}

    def test_force_replacement_clears_stale_spans(self, tmp_path):
        run = make_run()
        with_spans = [
            json.dumps({"metric": "xcomet", "model_id": "m", "task": "t"}),
            json.dumps({"id": "1", "value": 0.5,
                        "spans": [{"start": 0, "end": 3, "severity": "major"}]}),
            json.dumps({"id": "2", "value": 0.5}),
            json.dumps({"id": "3", "value": 0.5}),
        ]
        ingest_scores(self.write(tmp_path, with_spans, "a.jsonl"), run)
        assert run.segments[0].error_spans
        without_spans = [
            json.dumps({"metric": "xcomet", "model_id": "m", "task": "t"}),
            json.dumps({"id": "1", "value": 0.9}),
            json.dumps({"id": "2", "value": 0.9}),
            json.dumps({"id": "3", "value": 0.9}),
        ]
        ingest_scores(self.write(tmp_path, without_spans, "b.jsonl"), run, force=True)
        assert run.segments[0].error_spans == []
        assert run.segments[0].error_spans_by_metric == {}


PLUGIN_OK = """
import json, sys
lines = sys.stdin.read().strip().split("\\n")
header = json.loads(lines[0])
print(json.dumps({"metric": header["metric"], "model_id": header["model_id"],
                  "task": header["task"], "aggregation": "mean"}))
for line in lines[1:]:
    record = json.loads(line)
    print(json.dumps({"id": record["id"], "value": 1.0}))
"""

PLUGIN_SPANS = """
import json, sys
lines = sys.stdin.read().strip().split("\\n")
header = json.loads(lines[0])
print(json.dumps({"metric": "xcomet", "model_id": header["model_id"],
                  "task": header["task"]}))
for line in lines[1:]:
    record = json.loads(line)
    n = max(1, len(record["hyp"]))
    print(json.dumps({"id": record["id"], "value": 0.2,
                      "spans": [{"start": 0, "end": n, "severity": "critical"}]}))
"""

PLUGIN_CRASH = """
import sys
print("boom", file=sys.stderr)
sys.exit(1)
"""


def plugin_cmd(tmp_path, code, name):
    path = tmp_path / name
    path.write_text(code, "utf-8")
    return [sys.executable, str(path)]


SEGMENTS = [
    {"id": "1", "src": "a", "hyp": "x y"},
    {"id": "2", "src": "b", "hyp": "z"},
]


class TestPlugins:
    def test_echo_plugin(self, tmp_path):
        cmd = plugin_cmd(tmp_path, PLUGIN_OK, "ok.py")
        esf = run_plugin(cmd, SEGMENTS, task="t", metric="stub", model_id="m")
        assert dict(esf.per_segment) == {"1": 1.0, "2": 1.0}

    def test_crash_captures_stderr(self, tmp_path):
        cmd = plugin_cmd(tmp_path, PLUGIN_CRASH, "crash.py")
        with pytest.raises(PluginCrash) as excinfo:
            run_plugin(cmd, SEGMENTS, task="t", metric="stub", model_id="m")
        assert "boom" in excinfo.value.stderr

    def test_timeout(self, tmp_path):
        cmd = plugin_cmd(tmp_path, "import time; time.sleep(30)", "slow.py")
        with pytest.raises(PluginTimeout):
            run_plugin(
                cmd, SEGMENTS, task="t", metric="stub", model_id="m",
                timeout=0.5,
            )

    def test_span_plugin_attaches_normalized_spans(self, tmp_path):
        run = make_run(ids=("1", "2"))
        cmd = plugin_cmd(tmp_path, PLUGIN_SPANS, "spans.py")
        segments = [
            {"id": seg.id, "src": seg.source, "hyp": seg.hypothesis}
            for seg in run.segments
        ]
        esf = run_plugin(cmd, segments, task="t", metric="xcomet", model_id="m")
        run.attach_external_scores(esf)
        for seg in run.segments:
            assert seg.error_spans == [
                ErrorSpan(0, len(seg.hypothesis), "critical")
            ]
