"""Configurable benchmark runs with journaled resume and comparison tables."""

from .compare import ComparisonRow, ComparisonTable, compare_runs
from .runner import EvalReport, RunSpec, run_eval, task_key

__all__ = [
    "ComparisonRow",
    "ComparisonTable",
    "EvalReport",
    "RunSpec",
    "compare_runs",
    "run_eval",
    "task_key",
]
