"""Figure rendering for the report paths of the command-line tools.

Every renderer takes a result object and a directory, writes one or more
PNG files there, and returns the written paths.  Rendering is strictly a
side channel: nothing here feeds back into solving or validation.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from . import values as V
from .reducer import ReductionReport, StepCostReport
from .solver import TaskResult
from .validator import AdequacyReport


_OK = "#2a7e43"
_BAD = "#b03a2e"
_SRC = "#5b7fa6"
_RED = "#d08a3e"


def _finish(fig, out_dir: Path, name: str, written: List[Path]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(path)


def _as_float(value) -> Optional[float]:
    if isinstance(value, V.Num):
        return float(value.value)
    return None


def render_solve(result: TaskResult, out_dir) -> List[Path]:
    """Chart a task result: the search funnel and any numeric outputs."""
    out_dir = Path(out_dir)
    written: List[Path] = []

    fig, ax = plt.subplots(figsize=(5, 3.2))
    stages = ["candidates", "pruned", "solutions"]
    counts = [
        result.stats.candidates,
        result.stats.pruned,
        len(result.solutions),
    ]
    bars = ax.bar(stages, counts, color=[_SRC, "#9aa5b1", _OK])
    for bar, count in zip(bars, counts):
        ax.annotate(
            str(count),
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize=9,
        )
    ax.set_ylabel("count")
    ax.set_title(f"search outcome: {result.status}")
    _finish(fig, out_dir, "search_outcome.png", written)

    numeric_cols = []
    if result.solutions:
        for pos, (name, _) in enumerate(result.solutions[0].outputs):
            vals = [
                _as_float(sol.outputs[pos][1]) for sol in result.solutions
            ]
            if all(v is not None for v in vals):
                numeric_cols.append((name, vals))
    if numeric_cols:
        fig, axes = plt.subplots(
            1,
            len(numeric_cols),
            figsize=(3.2 * len(numeric_cols), 3.2),
            squeeze=False,
        )
        xs = range(1, len(result.solutions) + 1)
        for ax, (name, vals) in zip(axes[0], numeric_cols):
            ax.bar(list(xs), vals, color=_SRC)
            ax.set_xticks(list(xs))
            ax.set_xlabel("solution")
            ax.set_title(name, fontsize=10)
        fig.suptitle("numeric outputs per solution", fontsize=11)
        _finish(fig, out_dir, "solution_outputs.png", written)
    return written


def render_validate(report: AdequacyReport, out_dir) -> List[Path]:
    """Chart an adequacy report: one verdict row per situation."""
    out_dir = Path(out_dir)
    written: List[Path] = []
    rows = report.situations
    fig, ax = plt.subplots(figsize=(6, 0.45 * max(len(rows), 2) + 1.2))
    names = [r.name for r in rows]
    ys = range(len(rows))
    colors = [_OK if r.matches else _BAD for r in rows]
    ax.barh(list(ys), [1] * len(rows), color=colors, height=0.6)
    for y, r in zip(ys, rows):
        ax.annotate(
            f"expected {r.expected}, judged {r.verdict}",
            (0.02, y),
            va="center",
            fontsize=8,
            color="white",
        )
    ax.set_yticks(list(ys))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xticks([])
    ax.invert_yaxis()
    verdict = "adequate" if report.model_adequate else "refuted"
    ax.set_title(f"corpus verdicts — model {verdict}")
    _finish(fig, out_dir, "corpus_verdicts.png", written)
    return written


def render_reduce(
    report: ReductionReport,
    out_dir,
    costs: Optional[Sequence[StepCostReport]] = None,
) -> List[Path]:
    """Chart a reduction: formula growth per step, and step costs if given."""
    out_dir = Path(out_dir)
    written: List[Path] = []
    for step in report.steps:
        names = [name for name, _, _ in step.per_formula]
        before = [b for _, b, _ in step.per_formula]
        after = [a for _, _, a in step.per_formula]
        ys = range(len(names))
        fig, ax = plt.subplots(figsize=(6, 0.5 * max(len(names), 2) + 1.4))
        h = 0.35
        ax.barh([y - h / 2 for y in ys], before, height=h, color=_SRC, label="before")
        ax.barh([y + h / 2 for y in ys], after, height=h, color=_RED, label="after")
        ax.set_yticks(list(ys))
        ax.set_yticklabels(names, fontsize=8)
        ax.invert_yaxis()
        ax.set_xlabel("formula nodes")
        ax.set_title(f"order {step.from_order} to {step.to_order}: formula sizes")
        ax.legend(fontsize=8)
        _finish(
            fig,
            out_dir,
            f"reduction_order_{step.from_order}_to_{step.to_order}.png",
            written,
        )
    if costs:
        names = [c.task for c in costs]
        src = [c.source_total for c in costs]
        red = [c.reduced_total for c in costs]
        xs = range(len(names))
        w = 0.35
        fig, ax = plt.subplots(figsize=(1.6 * max(len(names), 2) + 2, 3.4))
        ax.bar([x - w / 2 for x in xs], src, width=w, color=_SRC, label="source")
        ax.bar([x + w / 2 for x in xs], red, width=w, color=_RED, label="reduced")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(names, fontsize=8)
        ax.set_ylabel("evaluation + lookup steps")
        ax.set_title("per-task step totals over identical candidates")
        ax.legend(fontsize=8)
        _finish(fig, out_dir, "step_costs.png", written)
    return written


__all__ = ["render_solve", "render_validate", "render_reduce"]
