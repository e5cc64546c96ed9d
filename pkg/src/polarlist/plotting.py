"""Rendering of FER sweep results to image files.

Kept separate from the simulation core so headless runs never import
matplotlib unless a figure is actually requested.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_fer_curves(curves: dict, path, title: str | None = None) -> None:
    """Semilog FER-vs-Eb/N0 plot.

    curves maps a label to a list of FerPoint; zero-error points are
    dropped from the log axis rather than plotted at 0.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for label, points in curves.items():
        xs = [p.ebn0_db for p in points if p.fer > 0]
        ys = [p.fer for p in points if p.fer > 0]
        if not xs:
            continue
        ax.semilogy(xs, ys, marker="o", label=label)
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("FER")
    ax.grid(True, which="both", alpha=0.4)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
