"""Read-only HTTP API over a directory of persisted runs, plus one
compute endpoint for significance tests.  This is the data backend the
dashboard talks to; it never mutates run files.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .errors import AlignmentError, DegenerateInput, MetricMissing, RunNotFound
from .registry import lookup
from .results import EvalRun, load_run
from .runner import length_breakdown
from .significance import (
    DEFAULT_ALPHA,
    DEFAULT_RESAMPLES,
    DEFAULT_SEED,
    compare_runs,
)


class RunStore:
    """Run files indexed by filename stem, reloaded when mtime moves."""

    def __init__(self, runs_dir: Path | str):
        self.runs_dir = Path(runs_dir)
        self._cache: dict[str, tuple[float, EvalRun]] = {}

    def list_ids(self) -> list[str]:
        return sorted(
            p.stem
            for p in self.runs_dir.glob("*.json")
            if not p.name.startswith(".")
        )

    def get(self, run_id: str) -> EvalRun:
        path = self.runs_dir / f"{run_id}.json"
        if not path.is_file():
            raise RunNotFound(run_id)
        mtime = path.stat().st_mtime
        cached = self._cache.get(run_id)
        if cached and cached[0] == mtime:
            return cached[1]
        run = load_run(path)
        self._cache[run_id] = (mtime, run)
        return run


def _summary(run_id: str, run: EvalRun) -> dict:
    return {
        "id": run_id,
        "run_hash": run.run_hash,
        "task": run.task,
        "model_id": run.model_id,
        "created_at": run.created_at,
        "n_segments": len(run.segments),
        "metrics": run.metrics,
        "segment_metrics": run.segment_metrics,
        "corpus_only_metrics": run.corpus_only_metrics,
        "aggregates": run.aggregates,
        "lower_better": {m: lookup(m).lower_better for m in run.metrics},
        "task_reports": sorted(run.task_reports),
    }


class SignificanceRequest(BaseModel):
    run_a: str
    run_b: str
    metric: str
    n: int = Field(default=DEFAULT_RESAMPLES, ge=1)
    seed: int = DEFAULT_SEED
    alpha: float = Field(default=DEFAULT_ALPHA, gt=0, lt=1)


def create_app(runs_dir: Path | str) -> FastAPI:
    store = RunStore(runs_dir)
    app = FastAPI(title="mtlens results API")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def fetch(run_id: str) -> EvalRun:
        try:
            return store.get(run_id)
        except RunNotFound:
            raise HTTPException(404, f"unknown run {run_id!r}")

    @app.get("/runs")
    def list_runs():
        return [_summary(rid, store.get(rid)) for rid in store.list_ids()]

    @app.get("/runs/{run_id}")
    def run_detail(run_id: str):
        run = fetch(run_id)
        detail = _summary(run_id, run)
        detail["config"] = run.config
        detail["reports"] = run.task_reports
        return detail

    @app.get("/runs/{run_id}/segments")
    def run_segments(
        run_id: str,
        offset: int = Query(default=0, ge=0),
        limit: int = Query(default=50, ge=1, le=1000),
        sort: str | None = None,
    ):
        run = fetch(run_id)
        segments = list(run.segments)
        if sort:
            descending = sort.startswith("-")
            metric = sort.lstrip("+-").lower()
            if metric not in run.segment_metrics:
                raise HTTPException(
                    422, f"cannot sort by {metric!r}: no segment scores"
                )
            segments.sort(
                key=lambda s: s.scores.get(metric, 0.0), reverse=descending
            )
        window = segments[offset : offset + limit]
        return {
            "total": len(segments),
            "offset": offset,
            "limit": limit,
            "segments": [s.to_dict() for s in window],
        }

    @app.get("/runs/{run_id}/segments/{segment_id}")
    def run_segment(run_id: str, segment_id: str):
        run = fetch(run_id)
        try:
            return run.segment_by_id(segment_id).to_dict()
        except KeyError:
            raise HTTPException(404, f"unknown segment {segment_id!r}")

    @app.get("/runs/{run_id}/length")
    def run_length(run_id: str, metric: str):
        run = fetch(run_id)
        try:
            return length_breakdown(run, metric)
        except MetricMissing as exc:
            raise HTTPException(422, str(exc))

    @app.get("/runs/{run_id}/toxicity")
    def run_toxicity(run_id: str):
        run = fetch(run_id)
        report = run.task_reports.get("toxicity")
        if report is None:
            raise HTTPException(404, "run has no toxicity report")
        return report

    @app.get("/runs/{run_id}/gender")
    def run_gender(run_id: str):
        run = fetch(run_id)
        report = run.task_reports.get("gender")
        if report is None:
            raise HTTPException(404, "run has no gender report")
        return report

    @app.get("/perturbations")
    def perturbations(task: str, models: str = ""):
        wanted = [m for m in models.split(",") if m]
        out: dict = {"task": task, "models": {}}
        for rid in store.list_ids():
            run = store.get(rid)
            if run.task != task:
                continue
            if wanted and run.model_id not in wanted:
                continue
            report = run.task_reports.get("perturbations")
            if report:
                out["models"][run.model_id] = {"run_id": rid, **report}
        return out

    @app.post("/significance")
    def significance(request: SignificanceRequest):
        run_a = fetch(request.run_a)
        run_b = fetch(request.run_b)
        try:
            report = compare_runs(
                run_a,
                run_b,
                request.metric,
                n_resamples=request.n,
                seed=request.seed,
                alpha=request.alpha,
            )
        except MetricMissing as exc:
            raise HTTPException(409, str(exc))
        except (AlignmentError, DegenerateInput) as exc:
            raise HTTPException(422, str(exc))
        return {
            **report.to_dict(),
            "run_a": request.run_a,
            "run_b": request.run_b,
        }

    return app


def serve(runs_dir: Path | str, bind: str = "127.0.0.1:8400") -> None:
    """Blocking server entry point."""
    import uvicorn

    host, _, port = bind.partition(":")
    uvicorn.run(
        create_app(runs_dir), host=host or "127.0.0.1", port=int(port or 8400)
    )
