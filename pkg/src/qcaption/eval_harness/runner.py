"""Experiment runner: manifest in, metric report out.

Every task's outcome is appended to a JSONL journal as it lands, so an
interrupted run can resume by skipping journaled tasks, and the report is
always recomputable from the journal alone. Failed tasks are recorded and
excluded from metric denominators; they never abort the run.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..datasets import Manifest, QATask, load_manifest
from ..errors import QCaptionError
from ..evaluation import CiderConfig, JudgeVerdict, aggregate_qa, build_index, cider
from ..evaluation.judge import DEFAULT_JUDGE_PROMPT, judge_qa
from ..fusion_pipeline import PipelineConfig, run_task
from ..model_backends import BackendSet

JOURNAL_NAME = "journal.jsonl"
REPORT_JSON = "report.json"
REPORT_TEXT = "report.txt"
DETAILS_NAME = "details.jsonl"


@dataclass
class RunSpec:
    label: str
    pipeline: PipelineConfig
    manifest_path: str | Path
    backends: BackendSet
    output_dir: str | Path
    resume: bool = False
    workers: int = 2
    save_bundles: bool = True
    judge_template: str = DEFAULT_JUDGE_PROMPT
    cider_config: CiderConfig = field(default_factory=CiderConfig)


@dataclass
class EvalReport:
    label: str
    dataset: str
    kind: str
    metrics: dict
    n_tasks: int
    n_scored: int
    n_failed: int
    failures: list[dict] = field(default_factory=list)
    run_config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "dataset": self.dataset,
            "kind": self.kind,
            "metrics": self.metrics,
            "n_tasks": self.n_tasks,
            "n_scored": self.n_scored,
            "n_failed": self.n_failed,
            "failures": self.failures,
            "run_config": self.run_config,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "EvalReport":
        return cls(**raw)

    @classmethod
    def load(cls, path: str | Path) -> "EvalReport":
        return cls.from_dict(json.loads(Path(path).read_text()))


def task_key(task) -> str:
    if isinstance(task, QATask):
        return f"{task.video_id}||{task.question}"
    return task.video_id


class _Journal:
    """Append-only JSONL of per-task outcomes, safe for one writer pool."""

    def __init__(self, path: Path, resume: bool):
        self.path = path
        self.rows: dict[str, dict] = {}
        if resume and path.exists():
            with open(path) as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        row = json.loads(line)
                        self.rows[row["key"]] = row
        else:
            path.write_text("")
        self._fh = open(path, "a")
        self._lock = threading.Lock()

    def append(self, row: dict) -> None:
        with self._lock:
            self.rows[row["key"]] = row
            self._fh.write(json.dumps(row, sort_keys=True) + "\n")
            self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def _run_one_task(task, spec: RunSpec, out_dir: Path) -> dict:
    key = task_key(task)
    pipeline_cfg = spec.pipeline
    if isinstance(task, QATask):
        pipeline_cfg = replace(pipeline_cfg, task_kind="qa", question=task.question)
    try:
        bundle = run_task(task.video_path, pipeline_cfg, spec.backends)
        row = {"key": key, "video_id": task.video_id, "status": "ok",
               "answer": bundle.answer, "error": None, "verdict": None,
               "bundle_path": None}
        if spec.save_bundles:
            bundles_dir = out_dir / "bundles"
            bundles_dir.mkdir(exist_ok=True)
            safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in key)[:80]
            bundle_path = bundles_dir / f"{safe}.json"
            bundle_path.write_text(bundle.to_json())
            row["bundle_path"] = str(bundle_path.relative_to(out_dir))
        if isinstance(task, QATask):
            verdict = judge_qa(task.question, task.answer, bundle.answer,
                               spec.backends.require("judge"),
                               template=spec.judge_template)
            row["verdict"] = verdict.to_dict()
        return row
    except (QCaptionError, OSError) as exc:
        return {"key": key, "video_id": task.video_id, "status": "error",
                "answer": None, "error": f"{type(exc).__name__}: {exc}",
                "verdict": None, "bundle_path": None}


def _aggregate(manifest: Manifest, journal_rows: dict[str, dict],
               spec: RunSpec) -> tuple[dict, list[dict], list[dict]]:
    """(metrics, per-item details, failures) from journal rows."""
    failures = [
        {"key": row["key"], "error": row["error"]}
        for row in journal_rows.values() if row["status"] == "error"
    ]
    details: list[dict] = []
    if spec.pipeline.task_kind == "caption":
        index = build_index([task.references for task in manifest.tasks])
        raws = []
        for task in manifest.tasks:
            row = journal_rows.get(task_key(task))
            if not row or row["status"] != "ok":
                continue
            score = cider(row["answer"], task.references, index, spec.cider_config)
            raws.append(score.raw)
            details.append({"key": row["key"], "cider_raw": score.raw,
                            "cider": score.scaled})
        if not raws:
            return {"cider": 0.0, "cider_raw": 0.0}, details, failures
        mean_raw = sum(raws) / len(raws)
        metrics = {"cider": mean_raw * spec.cider_config.report_scale,
                   "cider_raw": mean_raw}
        return metrics, details, failures

    verdicts = []
    for task in manifest.tasks:
        row = journal_rows.get(task_key(task))
        if not row or row["status"] != "ok" or row["verdict"] is None:
            continue
        verdict = JudgeVerdict.from_dict(row["verdict"])
        verdicts.append(verdict)
        details.append({"key": row["key"], "matched": verdict.matched,
                        "score": verdict.score})
    if not verdicts:
        return {"accuracy": 0.0, "score": 0.0}, details, failures
    summary = aggregate_qa(verdicts)
    return {"accuracy": summary.accuracy, "score": summary.mean_score}, details, failures


def _format_report_text(report: EvalReport) -> str:
    metric_cells = "  ".join(f"{k}={v:.4f}" for k, v in sorted(report.metrics.items()))
    header = f"{'label':<40} {'dataset':<24} {'kind':<8} metrics"
    row = f"{report.label:<40} {report.dataset:<24} {report.kind:<8} {metric_cells}"
    tail = (f"tasks={report.n_tasks} scored={report.n_scored} "
            f"failed={report.n_failed}")
    return "\n".join([header, row, tail]) + "\n"


def run_eval(spec: RunSpec) -> EvalReport:
    out_dir = Path(spec.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = load_manifest(spec.manifest_path, spec.pipeline.task_kind,
                             strict=True, check_videos=False)

    journal = _Journal(out_dir / JOURNAL_NAME, resume=spec.resume)
    try:
        pending = [t for t in manifest.tasks if task_key(t) not in journal.rows]
        if pending:
            with ThreadPoolExecutor(max_workers=spec.workers) as pool:
                for row in pool.map(lambda t: _run_one_task(t, spec, out_dir), pending):
                    journal.append(row)
        metrics, details, failures = _aggregate(manifest, journal.rows, spec)
    finally:
        journal.close()

    report = EvalReport(
        label=spec.label,
        dataset=manifest.source,
        kind=spec.pipeline.task_kind,
        metrics=metrics,
        n_tasks=len(manifest.tasks),
        n_scored=len(details),
        n_failed=len(failures),
        failures=failures,
        run_config={
            "strategy": spec.pipeline.strategy,
            "n_frames": spec.pipeline.n_frames,
            "seed": spec.pipeline.seed,
            "use_llm": spec.pipeline.use_llm,
        },
    )
    (out_dir / REPORT_JSON).write_text(
        json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    (out_dir / REPORT_TEXT).write_text(_format_report_text(report))
    with open(out_dir / DETAILS_NAME, "w") as fh:
        for detail in details:
            fh.write(json.dumps(detail, sort_keys=True) + "\n")
    return report
