"""Matplotlib renderings of the report artifacts as PNG figures.

These mirror the svg tables for people who want a picture: the metric
heatmap with its marginal rank row and rank column, and the pairwise
Bayesian matrix. Machine-readable truth lives in the csv/json artifacts;
the figures are purely presentational, so nothing downstream parses them.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .report import HeatmapSpec
from .stats import PairwiseMatrix

_SCORE_CMAP = "Greens"
# Lower rank is better, so ranks use the reversed ramp (darker = lower).
_RANK_CMAP = "Greens_r"


def _annotate(ax, matrix: np.ndarray, fmt: str, threshold: float | None = None) -> None:
    lo, hi = float(np.nanmin(matrix)), float(np.nanmax(matrix))
    cut = (lo + hi) / 2 if threshold is None else threshold
    for (r, c), v in np.ndenumerate(matrix):
        if np.isnan(v):
            continue
        colour = "white" if v > cut else "black"
        ax.text(c, r, format(v, fmt), ha="center", va="center", color=colour, fontsize=9)


def heatmap_png(spec: HeatmapSpec, path: str | Path, dpi: int = 150) -> Path:
    """Render the metric heatmap with marginal rankings to a PNG file."""
    grid = spec.grid
    scores = grid.mean_score.T  # display rows = encoders, columns = architectures
    arch_rank = dict(spec.row_ranking)
    enc_rank = dict(spec.column_ranking)
    arch_ranks = np.array([[arch_rank[a] for a in grid.architectures]])
    enc_ranks = np.array([[enc_rank[e]] for e in grid.encoders])

    n_arch = len(grid.architectures)
    n_enc = len(grid.encoders)
    fig_w = 1.8 + 0.95 * (n_arch + 1)
    fig_h = 1.2 + 0.42 * (n_enc + 1)
    fig, axes = plt.subplots(
        2,
        2,
        figsize=(fig_w, fig_h),
        gridspec_kw={
            "width_ratios": [1, n_arch],
            "height_ratios": [1, n_enc],
            "wspace": 0.05,
            "hspace": 0.05,
        },
    )
    (ax_corner, ax_top), (ax_left, ax_main) = axes
    ax_corner.axis("off")

    ax_top.imshow(arch_ranks, cmap=_RANK_CMAP, aspect="auto")
    _annotate(ax_top, arch_ranks, ".2f", threshold=(arch_ranks.min() + arch_ranks.max()) / 2)
    # the rank colormap is reversed, so dark cells are the LOW values
    for txt in ax_top.texts:
        v = float(txt.get_text())
        txt.set_color("white" if v < (arch_ranks.min() + arch_ranks.max()) / 2 else "black")
    ax_top.set_xticks([])
    ax_top.set_yticks([0])
    ax_top.set_yticklabels(["avg rank"], fontsize=9)

    ax_left.imshow(enc_ranks, cmap=_RANK_CMAP, aspect="auto")
    _annotate(ax_left, enc_ranks, ".2f")
    for txt in ax_left.texts:
        v = float(txt.get_text())
        txt.set_color("white" if v < (enc_ranks.min() + enc_ranks.max()) / 2 else "black")
    ax_left.set_xticks([0])
    ax_left.set_xticklabels(["avg rank"], fontsize=9, rotation=90)
    ax_left.xaxis.set_ticks_position("top")
    ax_left.set_yticks(range(n_enc))
    ax_left.set_yticklabels(grid.encoders, fontsize=9)

    ax_main.imshow(scores, cmap=_SCORE_CMAP, aspect="auto")
    ax_main.set_xticks(range(n_arch))
    ax_main.set_xticklabels(grid.architectures, fontsize=9)
    ax_main.xaxis.set_ticks_position("top")
    ax_main.set_yticks([])

    lo, hi = float(scores.min()), float(scores.max())
    cut = (lo + hi) / 2
    for (r, c), v in np.ndenumerate(scores):
        arch = grid.architectures[c]
        enc = grid.encoders[r]
        bold = (arch, enc) == spec.best_overall
        colour = "white" if v > cut else "black"
        ax_main.text(
            c,
            r,
            f"{v:.3f}",
            ha="center",
            va="center",
            fontsize=9,
            color=colour,
            fontweight="bold" if bold else "normal",
        )
        if enc in spec.best_per_column[arch]:
            # matplotlib has no text underline; draw it
            ax_main.plot([c - 0.16, c + 0.16], [r + 0.18, r + 0.18], color=colour, linewidth=0.9)

    fig.suptitle(f"mean {spec.metric_name} per architecture and encoder", fontsize=11)
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return out


def bayes_png(matrix: PairwiseMatrix, path: str | Path, dpi: int = 150) -> Path:
    """Render the pairwise Bayesian matrix to a PNG file."""
    names = matrix.names
    n = len(names)
    diff = np.full((n, n), np.nan)
    for (i, j), cell in matrix.cells.items():
        diff[i, j] = cell.cf_right - cell.cf_left

    fig_w = 1.6 + 1.0 * n
    fig_h = 1.4 + 0.7 * n
    fig, ax = plt.subplots(figsize=(fig_w, fig_h))
    cmap = matplotlib.colormaps[_SCORE_CMAP].copy()
    cmap.set_bad("#dddddd")
    ax.imshow(np.ma.masked_invalid(diff), cmap=cmap, vmin=-1.0, vmax=1.0, aspect="auto")
    ax.set_xticks(range(n))
    ax.set_xticklabels(names, fontsize=9, rotation=30, ha="left")
    ax.xaxis.set_ticks_position("top")
    ax.set_yticks(range(n))
    ax.set_yticklabels(names, fontsize=9)

    for (i, j), cell in matrix.cells.items():
        colour = "white" if diff[i, j] > 0.3 else "black"
        ax.text(j, i - 0.18, f"{cell.cf_right:.3f}", ha="center", va="center", fontsize=8, color=colour)
        ax.text(j, i + 0.22, f"{cell.cf_left:.3f}", ha="center", va="center", fontsize=8, color=colour)

    ax.set_title("row better (top) vs column better (bottom)", fontsize=11, pad=28)
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return out
