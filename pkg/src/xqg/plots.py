"""Figure rendering for sweep and matrix reports.

Figures are written next to the delimited output files; the data files
remain the primary artifact, the images are for eyeballing. The Agg
backend is forced so rendering works headless and byte-reproducibly.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiments import CrossLanguageMatrix, SweepResult

__all__ = ["plot_sweep", "plot_matrix"]

_PNG_METADATA = {"Software": "xqg"}


def plot_sweep(result: SweepResult, path: str | Path) -> None:
    """Average recall per metric over the swept grid.

    A marker is starred when at least one language's Bonferroni-corrected
    improvement over the baseline is significant at 0.05.
    """
    spec = result.spec
    numeric = spec.variable in ("alpha", "n_queries")
    xs = list(range(len(spec.grid))) if not numeric else [float(v) for v in spec.grid]

    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    for m in spec.m_tokens_list:
        ys = [row.metrics[m].average for row in result.rows]
        name = result.rows[0].metrics[m].name
        (line,) = ax.plot(xs, ys, marker="o", markersize=4, label=name)
        star_x, star_y = [], []
        for x, row in zip(xs, result.rows):
            sig = row.significance.get(m)
            if sig is not None and any(c.significant for c in sig.comparisons):
                star_x.append(x)
                star_y.append(row.metrics[m].average)
        if star_x:
            ax.plot(star_x, star_y, linestyle="none", marker="*", markersize=11,
                    color=line.get_color())
    if not numeric:
        ax.set_xticks(xs)
        ax.set_xticklabels([v if v else "none" for v in spec.grid])
    ax.set_xlabel(spec.variable)
    ax.set_ylabel("recall (language average)")
    ax.legend(frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)


def plot_matrix(matrix: CrossLanguageMatrix, path: str | Path) -> None:
    """Grid of recall-vs-alpha curves: targets as rows, sources as columns."""
    nrows, ncols = len(matrix.targets), len(matrix.sources)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(2.4 * ncols, 1.9 * nrows),
        sharex=True, sharey=True, squeeze=False,
    )
    for r, target in enumerate(matrix.targets):
        for c, source in enumerate(matrix.sources):
            ax = axes[r][c]
            curve = matrix.cell(target, source)
            xs = [p.alpha for p in curve]
            ys = [p.recall for p in curve]
            ax.plot(xs, ys, marker="o", markersize=3)
            stars = [(p.alpha, p.recall) for p in curve if p.significant]
            if stars:
                ax.plot(*zip(*stars), linestyle="none", marker="*", markersize=9, color="C1")
            if r == 0:
                ax.set_title(f"src {source.code}", fontsize=9)
            if c == 0:
                ax.set_ylabel(f"tgt {target.code}\n{matrix.metric}", fontsize=8)
            ax.grid(True, alpha=0.3)
            ax.tick_params(labelsize=7)
    for ax in axes[-1]:
        ax.set_xlabel("alpha", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
