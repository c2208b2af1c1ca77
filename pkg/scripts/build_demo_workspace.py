#!/usr/bin/env python3
"""Build a self-contained demo workspace under ./demo and evaluate two
toy systems on it, so `mtlens serve --runs demo/runs` (and the
dashboard) have real data to show.

Creates:
  demo/data/...        four tasks: general MT, toxicity, term accuracy,
                       contrastive accuracy
  demo/hyps/...        pre-generated translations for sys-alpha / sys-beta,
                       plus degraded translations of noised sources
  demo/scores/...      external score files (QE stub, span stub)
  demo/runs/*.json     persisted evaluation runs
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from mtlens.perturb import NoiseSpec, export_perturbed, perturb_corpus
from mtlens.runner import parse_config, run_task
from mtlens.tasks import load_corpus, parse_task_name

BASE = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo")

SOURCES = [
    "The committee will publish its final report on Monday.",
    "A light rain kept the tourists away from the old harbour.",
    "She repaired the telescope with parts from the market.",
    "The translation system struggled with the longest sentences.",
    "Fresh bread and strong coffee started every single day.",
    "The mayor promised faster trains between the two cities.",
    "Nobody remembered who had planted the walnut tree.",
    "The archive keeps one copy of every printed newspaper.",
]
REFS = [
    "El comitè publicarà el seu informe final dilluns.",
    "Una pluja fina va mantenir els turistes lluny del port vell.",
    "Ella va reparar el telescopi amb peces del mercat.",
    "El sistema de traducció va tenir problemes amb les frases més llargues.",
    "Pa fresc i cafè fort començaven cada dia.",
    "L'alcalde va prometre trens més ràpids entre les dues ciutats.",
    "Ningú recordava qui havia plantat la noguera.",
    "L'arxiu conserva una còpia de cada diari imprès.",
]
HYPS_ALPHA = [
    "El comitè publicarà el seu informe final dilluns.",
    "Una pluja fina va mantenir els turistes lluny del port vell.",
    "Ella va reparar el telescopi amb peces del mercat.",
    "El sistema de traducció va tenir problemes amb les frases llargues.",
    "Pa fresc i cafè fort començaven cada dia.",
    "L'alcalde va prometre trens ràpids entre les dues ciutats.",
    "Ningú recordava qui havia plantat la noguera.",
    "L'arxiu conserva una còpia de cada diari imprès.",
]
HYPS_BETA = [
    "El comitè publica l'informe dilluns.",
    "La pluja va mantenir turistes lluny del port.",
    "Va reparar el telescopi amb peces de mercat.",
    "El sistema de traducció té problemes amb frases llargues.",
    "Pa fresc i cafè començaven el dia.",
    "L'alcalde promet trens ràpids entre ciutats.",
    "Ningú recorda qui va plantar l'arbre.",
    "L'arxiu guarda una còpia de cada diari.",
]


def write_lines(path: Path, lines) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines), "utf-8")
    return path


def write_scores(path: Path, metric: str, model_id: str, task: str, values,
                 spans=None) -> Path:
    lines = [json.dumps({"metric": metric, "model_id": model_id,
                         "task": task, "aggregation": "mean"})]
    for i, value in enumerate(values):
        record = {"id": str(i), "value": value}
        if spans and str(i) in spans:
            record["spans"] = spans[str(i)]
        lines.append(json.dumps(record, ensure_ascii=False))
    return write_lines(path, lines)


def degraded(texts, k):
    out = []
    for text in texts:
        words = text.split()
        for j in range(min(k, len(words))):
            words[j] = "▮" * max(2, len(words[j]) - 1)
        out.append(" ".join(words))
    return out


def main() -> None:
    data = BASE / "data"
    runs = BASE / "runs"
    task_name = "en_ca_flores_devtest"

    write_lines(data / task_name / "source.txt", SOURCES)
    write_lines(data / task_name / "ref.0.txt", REFS)
    hyp_alpha = write_lines(BASE / "hyps" / "alpha.txt", HYPS_ALPHA)
    hyp_beta = write_lines(BASE / "hyps" / "beta.txt", HYPS_BETA)

    # noised sources (for the record) and degraded translations per level
    corpus = load_corpus(parse_task_name(task_name), data)
    perturb_hyps: dict[str, dict[str, dict[str, str]]] = {}
    for model, base_hyps in (("alpha", HYPS_ALPHA), ("beta", HYPS_BETA)):
        perturb_hyps[model] = {}
        for kind in ("swap", "chardupe", "chardrop"):
            export_perturbed(
                perturb_corpus(corpus, NoiseSpec(kind, 0.5, seed=11)),
                data / task_name,
            )
            per_level = {}
            for level, k in ((0.1, 1), (0.5, 2), (0.9, 4)):
                factor = 1 if model == "alpha" else 2
                path = write_lines(
                    BASE / "hyps" / f"{model}.{kind}.{level}.txt",
                    degraded(base_hyps, k * factor),
                )
                per_level[str(level)] = str(path)
            perturb_hyps[model][kind] = per_level

    # stub external quality scores; beta gets one critical span per
    # flagged segment to exercise the comparison view
    task = task_name
    kiwi_alpha = write_scores(
        BASE / "scores" / "kiwi.alpha.jsonl", "comet-kiwi", "sys-alpha", task,
        [0.86, 0.84, 0.88, 0.83, 0.85, 0.82, 0.87, 0.86],
    )
    kiwi_beta = write_scores(
        BASE / "scores" / "kiwi.beta.jsonl", "comet-kiwi", "sys-beta", task,
        [0.71, 0.64, 0.69, 0.66, 0.62, 0.65, 0.60, 0.67],
    )
    xcomet_beta = write_scores(
        BASE / "scores" / "xcomet.beta.jsonl", "xcomet", "sys-beta", task,
        [0.61, 0.54, 0.59, 0.56, 0.52, 0.55, 0.50, 0.57],
        spans={
            "0": [{"start": 0, "end": 9, "severity": "major"}],
            "3": [{"start": 10, "end": 20, "severity": "critical"}],
            "6": [{"start": 0, "end": 5, "severity": "minor"}],
        },
    )

    for model_id, hyp, scores in (
        ("sys-alpha", hyp_alpha, [kiwi_alpha]),
        ("sys-beta", hyp_beta, [kiwi_beta, xcomet_beta]),
    ):
        short = model_id.split("-")[1]
        config = parse_config(
            {
                "task": task_name,
                "model_id": model_id,
                "data_root": str(data),
                "hypothesis": str(hyp),
                "output_dir": str(runs),
                "metrics": ["bleu", "chrf", "ter"],
                "external_scores": [{"file": str(s)} for s in scores],
                "perturbations": {
                    "metrics": ["bleu", "chrf"],
                    "hypotheses": perturb_hyps[short],
                },
            }
        )
        print("run:", run_task(config))

    # toxicity demo task (reference-free, word-list matching)
    tox_task = "en_ca_gender_hb"
    tox_sources = [f"demo source {i}" for i in range(12)]
    write_lines(data / tox_task / "source.txt", tox_sources)
    write_lines(
        data / tox_task / "meta.tsv",
        ["axis"] + ["gender"] * 6 + ["ability"] * 6,
    )
    tox_hyps = ["frase neta"] * 12
    tox_hyps[3] = "un snollygoster apareix"
    tox_hyps[9] = "el dingus torna"
    tox_hyp = write_lines(BASE / "hyps" / "alpha.tox.txt", tox_hyps)
    lexicon = write_lines(
        BASE / "lexicons" / "ca.txt",
        ["# demo word list", "snollygoster", "dingus", "blatherskite"],
    )
    mutox_src = write_scores(
        BASE / "scores" / "mutox.src.jsonl", "mutox", "source", tox_task,
        [0.1] * 11 + [0.9],
    )
    config = parse_config(
        {
            "task": tox_task,
            "model_id": "sys-alpha",
            "data_root": str(data),
            "hypothesis": str(tox_hyp),
            "output_dir": str(runs),
            "metrics": [],
            "toxicity": {
                "lexicon": str(lexicon),
                "source_scores": str(mutox_src),
                "source_threshold": 0.5,
            },
        }
    )
    print("run:", run_task(config))

    # gendered-term accuracy demo task
    ms_task = "en_ca_must_she"
    write_lines(data / ms_task / "source.txt",
                ["My friend arrived.", "The doctor spoke.", "The teacher left."])
    write_lines(data / ms_task / "ref.0.txt",
                ["La meva amiga va arribar.", "La doctora va parlar.",
                 "La professora va marxar."])
    write_lines(
        data / ms_task / "meta.tsv",
        ["term_pairs\tcategory", "amiga|amic\t1F", "doctora|doctor\t1F",
         "professora|professor\t1F"],
    )
    ms_hyp = write_lines(
        BASE / "hyps" / "alpha.mustshe.txt",
        ["La meva amiga va arribar.", "El doctor va parlar.",
         "La professora va marxar."],
    )
    config = parse_config(
        {
            "task": ms_task,
            "model_id": "sys-alpha",
            "data_root": str(data),
            "hypothesis": str(ms_hyp),
            "output_dir": str(runs),
            "metrics": ["chrf"],
        }
    )
    print("run:", run_task(config))

    print(f"\ndemo workspace ready: {BASE}/")
    print(f"serve it with:  mtlens serve --runs {runs} --bind 127.0.0.1:8400")


if __name__ == "__main__":
    main()
