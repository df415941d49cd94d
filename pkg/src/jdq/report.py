"""Report serialization: JSON documents, sweep CSV, figures, and timings."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from .damage import JdiReport, SweepRow
from .metrics import SegMetrics

SCHEMA_VERSION = 1

SWEEP_CSV_HEADER = "threshold,recall,error,jdi_percent"


def jdi_report_dict(report: JdiReport) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "damage_area": report.damage_area,
        "denominator": report.denominator,
        "jdi": report.jdi,
        "damaged_face_count": report.damaged_face_count,
        "params": {
            "sawcut_length": report.params.sawcut_length,
            "d_max": report.params.d_max,
            "coordinate_scale": report.params.coordinate_scale,
            "threshold": report.params.threshold,
        },
    }


def seg_metrics_dict(metrics: SegMetrics) -> dict:
    return {"schema": SCHEMA_VERSION, **metrics.to_dict()}


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _csv_num(value) -> str:
    if value is None:
        return ""
    return str(int(value)) if isinstance(value, int) else repr(float(value))


def format_sweep_csv(rows: list[SweepRow]) -> str:
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            str(r.threshold), _csv_num(r.recall), _csv_num(r.error), _csv_num(r.jdi)]))
    return "\n".join(lines) + "\n"


def render_sweep_figure(rows: list[SweepRow], path) -> None:
    """Plot recall, error, and damage index against the threshold and save
    the figure next to the CSV report."""
    from matplotlib.figure import Figure

    thresholds = [r.threshold for r in rows]
    panels = [
        ("recall", [r.recall for r in rows], "tab:green"),
        ("error", [r.error for r in rows], "tab:red"),
        ("JDI (%)", [r.jdi for r in rows], "tab:blue"),
    ]
    fig = Figure(figsize=(6.0, 7.2), dpi=120)
    axes = fig.subplots(3, 1, sharex=True)
    for ax, (label, values, color) in zip(axes, panels):
        pts = [(t, v) for t, v in zip(thresholds, values) if v is not None]
        if pts:
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker="o", color=color)
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
    axes[-1].set_xlabel("red color threshold")
    axes[0].set_title("Damage quantification vs. red threshold")
    fig.savefig(Path(path), format="png", bbox_inches="tight")


@dataclass
class StageTiming:
    name: str
    seconds: float
    ok: bool = True


@dataclass
class RunReport:
    """Per-stage wall-clock timings plus input/output descriptors.

    Timing is observational and run-dependent, so it is kept out of the
    deterministic report artifacts and emitted separately (stderr or a
    dedicated timing file).
    """

    command: str
    inputs: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    stages: list = field(default_factory=list)

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            self.stages.append(StageTiming(name, time.perf_counter() - start, ok=False))
            raise
        self.stages.append(StageTiming(name, time.perf_counter() - start))

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.stages)

    @property
    def total_seconds(self) -> float:
        return sum(s.seconds for s in self.stages)

    def lines(self) -> list[str]:
        out = []
        for s in self.stages:
            mark = "" if s.ok else "  [FAILED]"
            out.append(f"[time] {self.command} {s.name}: {s.seconds:.3f} s{mark}")
        out.append(f"[time] {self.command} total: {self.total_seconds:.3f} s")
        return out

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "ok": self.ok,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "stages": [{"name": s.name, "seconds": s.seconds, "ok": s.ok}
                       for s in self.stages],
            "total_seconds": self.total_seconds,
        }
