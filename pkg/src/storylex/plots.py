"""Bar-chart emission for readability and audit comparisons (PNG, Agg backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .readability import IMPROVEMENT_DIRECTION  # noqa: E402

_TITLES = {
    "fre": "Flesch Reading Ease",
    "fkgl": "Flesch-Kincaid Grade Level",
    "gfi": "Gunning-Fog Index",
    "ari": "Automated Readability Index",
}


def emit_metric_bar(metric: str, values: Mapping[str, float],
                    outdir: str | Path) -> Path:
    """One bar per label; an arrow in the corner marks the easier direction."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    labels = list(values)
    heights = [values[k] for k in labels]

    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(labels)), 3.2))
    ax.bar(labels, heights, color="#4878a8")
    ax.set_title(_TITLES.get(metric, metric))
    ax.set_ylabel(metric.upper())
    direction = IMPROVEMENT_DIRECTION.get(metric, "lower")
    arrow = "↑ easier" if direction == "higher" else "↓ easier"
    ax.annotate(arrow, xy=(0.99, 0.95), xycoords="axes fraction",
                ha="right", va="top", fontsize=10, color="#333333")
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    path = outdir / f"{metric}.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def emit_metric_bars(per_metric: Mapping[str, Mapping[str, float]],
                     outdir: str | Path) -> list[Path]:
    return [emit_metric_bar(metric, values, outdir)
            for metric, values in per_metric.items()]
