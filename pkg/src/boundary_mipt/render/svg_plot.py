"""SVG line plots, one series per system size."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from boundary_mipt.render.report_models import PlotSeries  # noqa: E402

# Fixed salt for SVG element ids; matplotlib otherwise draws a fresh uuid per file.
SVG_HASH_SALT = "boundary-mipt"


def write_svg_plot(
    series: Sequence[PlotSeries],
    path: Path,
    *,
    title: str = "",
    x_label: str = "param",
    y_label: str = "value",
    log_x: bool = False,
    log_y: bool = False,
) -> Path:
    """Markers joined by lines; empty series are skipped."""
    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        fig, ax = plt.subplots(figsize=(6, 4))
        try:
            for s in series:
                if not s.points:
                    continue
                xs, ys = zip(*sorted(s.points))
                ax.plot(xs, ys, marker="o", markersize=3, linewidth=1, label=s.label)
            if log_x:
                ax.set_xscale("log")
            if log_y:
                ax.set_yscale("log")
            ax.set_xlabel(x_label)
            ax.set_ylabel(y_label)
            if title:
                ax.set_title(title)
            if any(s.points for s in series):
                ax.legend(fontsize="small")
            fig.tight_layout()
            path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return path
