"""Relative-improvement comparison between run reports."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MissingBaseline
from .runner import EvalReport


@dataclass
class ComparisonRow:
    label: str
    metrics: dict[str, float]
    deltas_pct: dict[str, float]   # (run - baseline) / baseline * 100


@dataclass
class ComparisonTable:
    baseline_label: str
    baseline_metrics: dict[str, float]
    rows: list[ComparisonRow]

    def to_dict(self) -> dict:
        return {
            "baseline_label": self.baseline_label,
            "baseline_metrics": self.baseline_metrics,
            "rows": [{"label": r.label, "metrics": r.metrics,
                      "deltas_pct": r.deltas_pct} for r in self.rows],
        }

    def format_text(self) -> str:
        lines = [f"baseline: {self.baseline_label}"]
        keys = sorted(self.baseline_metrics)
        header = f"{'label':<40} " + "  ".join(f"{k:>18}" for k in keys)
        lines.append(header)
        base_cells = "  ".join(f"{self.baseline_metrics[k]:>18.4f}" for k in keys)
        lines.append(f"{self.baseline_label:<40} {base_cells}")
        for row in self.rows:
            cells = []
            for key in keys:
                if key in row.deltas_pct:
                    cells.append(f"{row.metrics[key]:>9.4f} ({row.deltas_pct[key]:+.1f}%)")
                else:
                    cells.append(f"{'-':>18}")
            lines.append(f"{row.label:<40} " + "  ".join(cells))
        return "\n".join(lines) + "\n"


def compare_runs(reports: list[EvalReport], baseline_label: str) -> ComparisonTable:
    """Relative improvement of every run against the named baseline row."""
    if len(reports) < 2:
        raise ValueError("need at least two reports to compare")
    baseline = next((r for r in reports if r.label == baseline_label), None)
    if baseline is None:
        raise MissingBaseline(
            f"no report labeled {baseline_label!r} among "
            f"{[r.label for r in reports]}"
        )
    rows = []
    for report in reports:
        if report is baseline:
            continue
        deltas = {}
        for key, value in report.metrics.items():
            base = baseline.metrics.get(key)
            if isinstance(base, (int, float)) and base != 0:
                deltas[key] = (value - base) / base * 100.0
        rows.append(ComparisonRow(label=report.label, metrics=dict(report.metrics),
                                  deltas_pct=deltas))
    return ComparisonTable(
        baseline_label=baseline.label,
        baseline_metrics=dict(baseline.metrics),
        rows=rows,
    )
