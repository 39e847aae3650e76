"""Figure rendering for the stats report: bar charts written next to the
JSON/text output. Computation lives in analytics; this module only draws."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 (backend must be pinned first)

_DIM_NAMES = {"f": "Instruction Following", "c": "Editing Consistency", "q": "Generation Quality"}


def _save(fig, out_dir: Path, name: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def _pct_values(dist: dict[str, Any]) -> tuple[list[str], list[float]]:
    labels = list(dist["counts"].keys())
    total = dist["total"]
    values = [dist["counts"][label] * 100.0 / total for label in labels]
    return labels, values


def render_score_marginals(section: dict[str, Any], out_dir: Path, name: str) -> Path:
    fig, axes = plt.subplots(1, 3, figsize=(9, 3), sharey=True)
    for ax, dim in zip(axes, ("f", "c", "q")):
        labels, values = _pct_values(section["marginals"][dim])
        ax.bar(labels, values, color="#4878a8")
        ax.set_title(_DIM_NAMES[dim], fontsize=9)
        ax.set_xlabel("score")
    axes[0].set_ylabel("% of samples")
    fig.suptitle(name.replace("_", " "))
    return _save(fig, out_dir, name)


def render_distribution(dist: dict[str, Any], out_dir: Path, name: str,
                        title: str, rotate: bool = False) -> Path:
    labels, values = _pct_values(dist)
    width = max(4.0, 0.45 * len(labels) + 1.5)
    fig, ax = plt.subplots(figsize=(width, 3.2))
    ax.bar(labels, values, color="#4878a8")
    ax.set_ylabel("% of samples")
    ax.set_title(title)
    if rotate:
        ax.tick_params(axis="x", rotation=75, labelsize=7)
    return _save(fig, out_dir, name)


def render_all_figures(doc: dict[str, Any], out_dir: Path) -> list[Path]:
    """Render every available table in the stats document; returns the paths."""
    out_dir = Path(out_dir)
    written: list[Path] = []
    for key in ("scores_pre_filter", "scores_kept"):
        section: Optional[dict] = doc.get(key)
        if not section:
            continue
        written.append(render_score_marginals(section, out_dir, f"{key}_marginals"))
        written.append(render_distribution(section["joint"], out_dir, f"{key}_joint",
                                           "Joint (F,C,Q) distribution", rotate=True))
        written.append(render_distribution(section["min_score"], out_dir, f"{key}_min_score",
                                           "Min-of-three score"))
    if doc.get("task_distribution"):
        written.append(render_distribution(doc["task_distribution"], out_dir,
                                           "task_distribution", "Task distribution", rotate=True))
    if doc.get("category_distribution"):
        written.append(render_distribution(doc["category_distribution"], out_dir,
                                           "category_distribution", "Category distribution",
                                           rotate=True))
    if doc.get("aspect_ratio"):
        written.append(render_distribution(doc["aspect_ratio"], out_dir,
                                           "aspect_ratio", "Aspect ratio distribution",
                                           rotate=True))
    return written
