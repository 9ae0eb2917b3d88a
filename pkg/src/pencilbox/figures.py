"""Matplotlib figure output for simulation reports.

The backend is forced to Agg before pyplot loads so the CLI never needs a
display; figures go straight to files next to the CSV they illustrate.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["save_trajectory_figure"]


def save_trajectory_figure(rows, path: str, title: str | None = None, dpi: int = 100) -> None:
    """Line chart of the T, C, I series over the years, written to ``path``.

    The image format follows the file extension (png, svg, pdf, ...);
    rows with undefined consumption or investment are simply not drawn
    for that series.
    """
    fig, ax = plt.subplots(figsize=(8.0, 5.0), dpi=dpi)
    try:
        for label, pick in (("T", lambda r: r.T), ("C", lambda r: r.C), ("I", lambda r: r.I)):
            ks = [r.k for r in rows if pick(r) is not None]
            ys = [pick(r) for r in rows if pick(r) is not None]
            ax.plot(ks, ys, label=label, linewidth=1.5)
        ax.set_xlabel("year k")
        ax.set_ylabel("currency units")
        if title:
            ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best")
        fig.savefig(path)
    finally:
        plt.close(fig)
