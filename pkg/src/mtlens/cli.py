"""Command-line entry points: run, ingest-scores, perturb, compare,
serve."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import MtLensError
from .external import ingest_scores
from .perturb import NoiseSpec, export_perturbed, perturb_corpus
from .results import load_run, save_run
from .runner import load_config, run_task
from .significance import (
    DEFAULT_ALPHA,
    DEFAULT_RESAMPLES,
    DEFAULT_SEED,
    compare_runs,
)
from .tasks import load_corpus, parse_task_name


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.plugin_timeout is not None:
        config.plugin_timeout = args.plugin_timeout
    path = run_task(config)
    print(path)
    return 0


def _resolve_run_path(ref: str, runs_dir: str) -> Path:
    p = Path(ref)
    if p.is_file():
        return p
    candidate = Path(runs_dir) / f"{ref}.json"
    if candidate.is_file():
        return candidate
    raise MtLensError(f"run not found: {ref}")


def _cmd_ingest(args) -> int:
    run_path = _resolve_run_path(args.run, args.runs)
    run = load_run(run_path)
    esf = ingest_scores(args.file, run, force=args.force)
    save_run(run, run_path)
    print(f"attached {esf.metric} ({len(esf.per_segment)} segments) to {run_path}")
    return 0


def _cmd_perturb(args) -> int:
    task = parse_task_name(args.task)
    corpus = load_corpus(task, args.root)
    spec = NoiseSpec(kind=args.kind, level=args.level, seed=args.seed)
    perturbed = perturb_corpus(corpus, spec)
    out_dir = args.out or (Path(args.root) / task.canonical())
    source_path, audit_path = export_perturbed(perturbed, out_dir)
    print(source_path)
    print(audit_path)
    return 0


def _cmd_compare(args) -> int:
    report = compare_runs(
        load_run(Path(args.run_a)),
        load_run(Path(args.run_b)),
        args.metric,
        n_resamples=args.n,
        seed=args.seed,
        alpha=args.alpha,
    )
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    serve(args.runs, bind=args.bind)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtlens",
        description="Score, analyze, and compare pre-generated machine "
        "translations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an evaluation run config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument(
        "--plugin-timeout", type=float, default=None,
        help="wall-clock bound in seconds for external score plugins",
    )
    p_run.set_defaults(fn=_cmd_run)

    p_ingest = sub.add_parser(
        "ingest-scores", help="attach an external score file to a run"
    )
    p_ingest.add_argument("--run", required=True, help="run id or path")
    p_ingest.add_argument("--file", required=True)
    p_ingest.add_argument("--runs", default="runs")
    p_ingest.add_argument("--force", action="store_true")
    p_ingest.set_defaults(fn=_cmd_ingest)

    p_perturb = sub.add_parser(
        "perturb", help="write noised sources for a task"
    )
    p_perturb.add_argument("--task", required=True)
    p_perturb.add_argument(
        "--kind", required=True, choices=["swap", "chardupe", "chardrop"]
    )
    p_perturb.add_argument(
        "--lambda", dest="level", type=float, required=True,
        help="fraction of eligible words to perturb, in [0, 1]",
    )
    p_perturb.add_argument("--seed", type=int, default=0)
    p_perturb.add_argument("--root", default="data")
    p_perturb.add_argument("--out", default=None)
    p_perturb.set_defaults(fn=_cmd_perturb)

    p_compare = sub.add_parser(
        "compare", help="paired bootstrap between two run files"
    )
    p_compare.add_argument("--run-a", required=True)
    p_compare.add_argument("--run-b", required=True)
    p_compare.add_argument("--metric", required=True)
    p_compare.add_argument("--n", type=int, default=DEFAULT_RESAMPLES)
    p_compare.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_compare.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p_compare.set_defaults(fn=_cmd_compare)

    p_serve = sub.add_parser("serve", help="serve runs over HTTP")
    p_serve.add_argument("--runs", required=True)
    p_serve.add_argument("--bind", default="127.0.0.1:8400")
    p_serve.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except MtLensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
