"""Builders for on-disk fixture workspaces shared across test modules."""

from __future__ import annotations

import json
from pathlib import Path

FLORES_TASK = "en_ca_flores_dev"

SOURCES = [
    "The cat sat on the mat.",
    "A small dog ran across the quiet road.",
    "She read the long book in the kitchen.",
    "Rain fell over the green hills all day.",
    "Birds sang in the tall trees at dawn.",
]
REFS = [
    "El gat va seure a l'estora.",
    "Un gos petit va creuar la carretera tranquil·la.",
    "Ella va llegir el llibre llarg a la cuina.",
    "La pluja va caure sobre els turons verds tot el dia.",
    "Els ocells cantaven als arbres alts a l'alba.",
]
HYPS_GOOD = [
    "El gat va seure a l'estora.",
    "Un gos petit va creuar la carretera tranquil·la.",
    "Ella va llegir el llibre llarg a la cuina.",
    "La pluja va caure sobre els turons verds tot el dia.",
    "Els ocells cantaven als arbres alts a l'alba.",
]
HYPS_WEAK = [
    "El gat seu a una estora.",
    "Un gos va creuar la carretera.",
    "Ella llegeix el llibre a la cuina.",
    "La pluja cau sobre els turons.",
    "Els ocells canten als arbres.",
]


def write_lines(path: Path, lines) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines), "utf-8")
    return path


def build_flores_dataset(root: Path) -> Path:
    d = root / FLORES_TASK
    write_lines(d / "source.txt", SOURCES)
    write_lines(d / "ref.0.txt", REFS)
    return d


def write_score_file(path: Path, metric: str, ids, values, model_id="sys",
                     task=FLORES_TASK, spans=None) -> Path:
    header = {"metric": metric, "model_id": model_id, "task": task,
              "aggregation": "mean"}
    lines = [json.dumps(header)]
    for i, v in zip(ids, values):
        record = {"id": str(i), "value": v}
        if spans and str(i) in spans:
            record["spans"] = spans[str(i)]
        lines.append(json.dumps(record))
    return write_lines(path, lines)


def build_workspace(base: Path) -> dict:
    """Data root + hypothesis files + run configs for two systems."""
    data_root = base / "data"
    build_flores_dataset(data_root)
    hyp_good = write_lines(base / "hyps" / "sys-good.txt", HYPS_GOOD)
    hyp_weak = write_lines(base / "hyps" / "sys-weak.txt", HYPS_WEAK)
    runs_dir = base / "runs"
    runs_dir.mkdir(exist_ok=True)

    spans = {
        "1": [{"start": 0, "end": 6, "severity": "critical"}],
        "3": [{"start": 3, "end": 8, "severity": "minor"},
              {"start": 5, "end": 12, "severity": "major"}],
    }
    xcomet_weak = write_score_file(
        base / "scores" / "xcomet.weak.jsonl", "xcomet",
        range(5), [0.55, 0.41, 0.63, 0.38, 0.52], model_id="sys-weak",
        spans=spans,
    )
    comet_good = write_score_file(
        base / "scores" / "comet.good.jsonl", "comet",
        range(5), [0.91, 0.88, 0.93, 0.90, 0.89], model_id="sys-good",
    )
    comet_weak = write_score_file(
        base / "scores" / "comet.weak.jsonl", "comet",
        range(5), [0.71, 0.63, 0.74, 0.66, 0.69], model_id="sys-weak",
    )

    def config(model_id, hyp_path, extra_scores):
        return {
            "task": FLORES_TASK,
            "model_id": model_id,
            "data_root": str(data_root),
            "hypothesis": str(hyp_path),
            "output_dir": str(runs_dir),
            "seed": 42,
            "metrics": [
                {"name": "bleu", "options": {}},
                {"name": "chrf", "options": {}},
                {"name": "ter", "options": {}},
            ],
            "external_scores": [{"file": str(p)} for p in extra_scores],
        }

    return {
        "base": base,
        "data_root": data_root,
        "runs_dir": runs_dir,
        "hyp_good": hyp_good,
        "hyp_weak": hyp_weak,
        "config_good": config("sys-good", hyp_good, [comet_good]),
        "config_weak": config("sys-weak", hyp_weak, [comet_weak, xcomet_weak]),
    }


def build_perturbation_workspace(base: Path) -> dict:
    """Flores task plus degraded hypothesis files per noise level."""
    ws = build_workspace(base)

    def corrupt(text: str, k: int) -> str:
        words = text.split()
        for j in range(min(k, len(words))):
            words[j] = f"zz{j}"
        return " ".join(words)

    hyp_map: dict[str, dict[str, str]] = {"swap": {}, "chardrop": {}}
    for kind in hyp_map:
        for level, k in ((0.25, 1), (0.5, 2), (0.75, 3)):
            path = write_lines(
                base / "hyps" / f"sys-weak.{kind}.{level}.txt",
                [corrupt(r, k) for r in HYPS_GOOD],
            )
            hyp_map[kind][str(level)] = str(path)
    ws["config_weak"]["perturbations"] = {
        "metrics": ["bleu", "chrf"],
        "hypotheses": hyp_map,
    }
    return ws
