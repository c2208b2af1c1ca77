"""Run configuration and the evaluation pipeline.

A run config (YAML) names the task, the system, the hypothesis file,
the metrics with their options, and any task-specific blocks
(toxicity, gender, perturbations, external score sources).  Running it
loads the corpus, aligns hypotheses, scores every metric segment-level
then aggregates, attaches task reports, and persists the run
atomically.  Identical config + inputs produce byte-identical run
files except for the created_at stamp.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .external import (
    DEFAULT_PLUGIN_TIMEOUT,
    read_score_file,
    run_plugin,
)
from .gender import (
    geneval_items_from_corpus,
    geneval_score,
    mmhb_groups_from_corpus,
    mmhb_score,
    mustshe_score,
    mustshe_segments_from_corpus,
)
from .metrics import compute
from .perturb import robustness_sweep
from .registry import NATIVE_METRICS
from .results import EvalRun, SegmentRecord, allocate_run_path, save_run
from .tasks import align_hypotheses, load_corpus, parse_task_name
from .toxicity import added_toxicity_report, load_lexicon

logger = logging.getLogger(__name__)

MUSTSHE_DATASETS = {"must_she"}
MMHB_DATASETS = {"mmhb"}
GENEVAL_DATASETS = {"geneval"}


@dataclass
class MetricSpec:
    name: str
    options: dict = field(default_factory=dict)


@dataclass
class RunConfig:
    task: str
    model_id: str
    hypothesis: str
    data_root: str
    output_dir: str = "runs"
    seed: int = 42
    metrics: list[MetricSpec] = field(default_factory=list)
    external_scores: list[dict] = field(default_factory=list)
    toxicity: dict = field(default_factory=dict)
    gender: dict = field(default_factory=dict)
    perturbations: dict = field(default_factory=dict)
    prompt_template: str = ""  # recorded for provenance, never executed
    plugin_timeout: float = DEFAULT_PLUGIN_TIMEOUT

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "model_id": self.model_id,
            "hypothesis": self.hypothesis,
            "data_root": self.data_root,
            "output_dir": self.output_dir,
            "seed": self.seed,
            "metrics": [
                {"name": m.name, "options": m.options} for m in self.metrics
            ],
            "external_scores": self.external_scores,
            "toxicity": self.toxicity,
            "gender": self.gender,
            "perturbations": self.perturbations,
            "prompt_template": self.prompt_template,
        }


def _parse_metric_entry(entry) -> MetricSpec:
    if isinstance(entry, str):
        return MetricSpec(name=entry.lower())
    if isinstance(entry, dict):
        if "name" not in entry:
            raise ConfigError(f"metric entry {entry!r} has no name")
        return MetricSpec(
            name=str(entry["name"]).lower(),
            options=dict(entry.get("options", {})),
        )
    raise ConfigError(f"bad metric entry {entry!r}")


def parse_config(data: dict, base_dir: Path | str = ".") -> RunConfig:
    base = Path(base_dir)
    try:
        config = RunConfig(
            task=str(data["task"]),
            model_id=str(data["model_id"]),
            hypothesis=str(data["hypothesis"]),
            data_root=str(data["data_root"]),
            output_dir=str(data.get("output_dir", "runs")),
            seed=int(data.get("seed", 42)),
            metrics=[_parse_metric_entry(m) for m in data.get("metrics", [])],
            external_scores=list(data.get("external_scores", [])),
            toxicity=dict(data.get("toxicity", {})),
            gender=dict(data.get("gender", {})),
            perturbations=dict(data.get("perturbations", {})),
            prompt_template=str(data.get("prompt_template", "")),
            plugin_timeout=float(
                data.get("plugin_timeout", DEFAULT_PLUGIN_TIMEOUT)
            ),
        )
    except KeyError as exc:
        raise ConfigError(f"config missing required key {exc.args[0]!r}") from exc
    # resolve paths relative to the config file location
    config.hypothesis = str(base / config.hypothesis)
    config.data_root = str(base / config.data_root)
    config.output_dir = str(base / config.output_dir)
    for key in ("lexicon", "source_scores", "qe_scores"):
        if config.toxicity.get(key):
            config.toxicity[key] = str(base / config.toxicity[key])
    for name, path in dict(config.toxicity.get("classifiers", {})).items():
        config.toxicity["classifiers"][name] = str(base / path)
    for entry in config.external_scores:
        if "file" in entry:
            entry["file"] = str(base / entry["file"])
    hyp_map = config.perturbations.get("hypotheses", {})
    for kind, by_level in hyp_map.items():
        for level, path in dict(by_level).items():
            by_level[level] = str(base / path)
    return config


def load_config(path: Path | str) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    data = yaml.safe_load(path.read_text("utf-8"))
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    return parse_config(data, base_dir=path.parent)


def validate_config(config: RunConfig) -> None:
    """Fail before any computation: files must exist, metric names must
    resolve."""
    task = parse_task_name(config.task)
    if not Path(config.hypothesis).is_file():
        raise ConfigError(f"hypothesis file not found: {config.hypothesis}")
    if not Path(config.data_root).is_dir():
        raise ConfigError(f"data root not found: {config.data_root}")
    for spec in config.metrics:
        if spec.name not in NATIVE_METRICS:
            raise ConfigError(
                f"metric {spec.name!r} is not computed natively; ingest it "
                "through external_scores"
            )
    for entry in config.external_scores:
        if "file" in entry:
            if not Path(entry["file"]).is_file():
                raise ConfigError(f"score file not found: {entry['file']}")
        elif "cmd" not in entry:
            raise ConfigError(
                f"external_scores entry needs file or cmd: {entry!r}"
            )
    if config.toxicity:
        lexicon = config.toxicity.get("lexicon")
        if not lexicon:
            raise ConfigError("toxicity block needs a lexicon path")
        if not Path(lexicon).is_file():
            raise ConfigError(f"lexicon not found: {lexicon}")
        for key in ("source_scores", "qe_scores"):
            p = config.toxicity.get(key)
            if p and not Path(p).is_file():
                raise ConfigError(f"toxicity {key} file not found: {p}")
        for name, p in config.toxicity.get("classifiers", {}).items():
            if not Path(p).is_file():
                raise ConfigError(
                    f"toxicity classifier {name!r} file not found: {p}"
                )
    _ = task  # parse errors propagate


def _scores_by_id(path: str) -> dict[str, float]:
    return dict(read_score_file(path).per_segment)


def _toxicity_report(config: RunConfig, corpus, hyps) -> dict:
    block = config.toxicity
    lexicon = load_lexicon(
        block["lexicon"],
        language=parse_task_name(config.task).tgt_lang,
        match_mode=block.get("match_mode", "token"),
    )
    classifier_scores = {
        name: _scores_by_id(path)
        for name, path in block.get("classifiers", {}).items()
    }
    return added_toxicity_report(
        corpus,
        hyps,
        lexicon,
        source_scores=(
            _scores_by_id(block["source_scores"])
            if block.get("source_scores")
            else None
        ),
        source_threshold=float(block.get("source_threshold", 0.5)),
        classifier_scores=classifier_scores,
        thresholds={
            k: float(v) for k, v in block.get("thresholds", {}).items()
        },
        qe_scores=(
            _scores_by_id(block["qe_scores"])
            if block.get("qe_scores")
            else None
        ),
        qe_metric=block.get("qe_metric", "comet-kiwi"),
    )


def _gender_reports(config: RunConfig, corpus, hyp_by_id: dict[str, str]) -> dict:
    dataset = parse_task_name(config.task).dataset.lower()
    block = config.gender
    reports: dict = {}

    if block.get("mustshe", dataset in MUSTSHE_DATASETS):
        segments = mustshe_segments_from_corpus(corpus)
        if segments:
            by_id = {s.segment_id: s for s in segments}
            aligned = [
                (hyp_by_id[seg.id], by_id[seg.id])
                for seg in corpus.segments
                if seg.id in by_id
            ]
            reports["mustshe"] = mustshe_score(
                [h for h, _ in aligned], [s for _, s in aligned]
            )
    if block.get("mmhb", dataset in MMHB_DATASETS):
        groups = mmhb_groups_from_corpus(corpus)
        if groups:
            refs_by_id = {
                seg.id: list(seg.references) for seg in corpus.segments
            }
            axes = (
                {s.id: s.metadata.get("axis", "unspecified")
                 for s in corpus.segments}
                if block.get("mmhb_by_axis")
                else None
            )
            reports["mmhb"] = mmhb_score(
                hyp_by_id, refs_by_id, groups, axes=axes
            )
    if block.get("geneval", dataset in GENEVAL_DATASETS):
        items = geneval_items_from_corpus(corpus)
        if items:
            by_id = {i.segment_id: i for i in items}
            aligned = [
                (hyp_by_id[seg.id], by_id[seg.id])
                for seg in corpus.segments
                if seg.id in by_id
            ]
            reports["geneval"] = geneval_score(
                [h for h, _ in aligned], [i for _, i in aligned]
            )
    return reports


def _perturbation_report(config: RunConfig, corpus) -> dict:
    block = config.perturbations
    hyp_files: dict[tuple[str, float], str] = {}
    for kind, by_level in block.get("hypotheses", {}).items():
        for level, path in by_level.items():
            hyp_files[(kind, float(level))] = path
    return robustness_sweep(
        corpus,
        hyp_files,
        metric_names=[m.lower() for m in block.get("metrics", ["bleu"])],
        metric_options=block.get("metric_options", {}),
        baseline_hyp=config.hypothesis,
        model_id=config.model_id,
    )


def run_task(config: RunConfig) -> Path:
    """Execute one evaluation run and persist it.  Returns the path of
    the written run file; nothing is written if any step fails."""
    validate_config(config)
    task = parse_task_name(config.task)
    corpus = load_corpus(task, config.data_root)
    hyp_set = align_hypotheses(corpus, config.hypothesis, config.model_id)
    hyps = hyp_set.texts
    hyp_by_id = dict(hyp_set.hypotheses)

    run = EvalRun(
        task=task.canonical(),
        model_id=config.model_id,
        config=config.to_dict(),
    )
    run.segments = [
        SegmentRecord(
            id=seg.id,
            source=seg.source,
            references=list(seg.references),
            hypothesis=hyp,
            metadata=dict(seg.metadata),
        )
        for seg, hyp in zip(corpus.segments, hyps)
    ]

    refs = corpus.references
    for spec in config.metrics:
        if corpus.reference_free:
            raise ConfigError(
                f"metric {spec.name!r} needs references but the task is "
                "reference-free"
            )
        run.add_native_scores(
            spec.name, compute(spec.name, hyps, refs, spec.options)
        )

    for entry in config.external_scores:
        if "file" in entry:
            esf = read_score_file(entry["file"])
        else:
            segments_payload = [
                {
                    "id": seg.id,
                    "src": seg.source,
                    "ref": seg.references[0] if seg.references else None,
                    "hyp": hyp,
                }
                for seg, hyp in zip(corpus.segments, hyps)
            ]
            esf = run_plugin(
                [str(c) for c in entry["cmd"]],
                segments_payload,
                task=task.canonical(),
                metric=str(entry.get("metric", "plugin")),
                model_id=config.model_id,
                timeout=float(entry.get("timeout", config.plugin_timeout)),
            )
        run.attach_external_scores(esf, force=bool(entry.get("force")))

    if config.toxicity:
        run.task_reports["toxicity"] = _toxicity_report(config, corpus, hyps)
    gender_reports = _gender_reports(config, corpus, hyp_by_id)
    if gender_reports:
        run.task_reports["gender"] = gender_reports
    if config.perturbations:
        run.task_reports["perturbations"] = _perturbation_report(
            config, corpus
        )

    out_path = allocate_run_path(run, config.output_dir)
    save_run(run, out_path)
    logger.info("run written to %s", out_path)
    return out_path


def length_breakdown(
    run: EvalRun,
    metric: str,
    bucket_size: int = 10,
    last_bucket_start: int = 50,
) -> dict:
    """Scatter points (source word count, segment score) plus bucketed
    means; default buckets 1-9, 10-19, ..., >=50."""
    from .errors import MetricMissing

    metric = metric.lower()
    if run.segments and metric not in run.segments[0].scores:
        raise MetricMissing(f"metric {metric!r} has no segment scores")
    points = [
        {"words": len(seg.source.split()), "score": seg.scores[metric],
         "id": seg.id}
        for seg in run.segments
        if metric in seg.scores
    ]
    buckets = []
    if points:
        starts = list(range(0, last_bucket_start, bucket_size)) + [
            last_bucket_start
        ]
        for i, start in enumerate(starts):
            end = (
                starts[i + 1] - 1 if i + 1 < len(starts) else None
            )
            members = [
                p["score"]
                for p in points
                if p["words"] >= max(start, 1)
                and (end is None or p["words"] <= end)
            ]
            if start == 0:
                label = f"1-{end}"
            elif end is None:
                label = f">={start}"
            else:
                label = f"{start}-{end}"
            buckets.append(
                {
                    "label": label,
                    "n": len(members),
                    "mean": sum(members) / len(members) if members else None,
                }
            )
    return {"metric": metric, "points": points, "buckets": buckets}
