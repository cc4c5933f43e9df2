"""Result artifacts: metric heatmap tables and the pairwise Bayesian matrix.

A heatmap table shows one score per architecture x encoder cell with two
marginal rankings: a rank row for the architectures (averaged across
encoders) above the matrix and a rank column for the encoders (averaged
across architectures) at its left. The best encoder within each
architecture column is underlined; the single best cell overall is bold.

Renderers never alter numbers: csv and json carry full double precision
(shortest round-trip form), while the svg prints 3 decimals for reading
and keeps exact values in data attributes. Cell shading is a monotone
function of the value within each panel: darker green is better, which
means higher for scores and lower for ranks. The Bayesian matrix colours
each cell by p_row_better - p_col_better with the same ramp.

For Bayesian cells the deterministic closed-form probabilities are the
headline columns (p_row_better / p_rope / p_col_better); the Monte Carlo
estimates ride along as mc_* columns.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .stats import BayesResult, PairwiseMatrix, ScoreGrid, average_rankings

HEATMAP_FORMATS = ("csv", "json", "svg")

# Endpoints of the green ramp (light to dark); every channel decreases
# with t so relative luminance is monotone in the shaded value.
_GREEN_LIGHT = (247, 252, 245)
_GREEN_DARK = (0, 68, 27)
_DIAGONAL_GREY = (221, 221, 221)

_CELL_W = 108
_CELL_H = 42
_LABEL_W = 168
_RANK_W = 72
_TITLE_H = 34
_NAME_H = 26
_FONT = "font-family=\"sans-serif\" font-size=\"13\""


@dataclass(frozen=True)
class HeatmapSpec:
    """A score grid plus its marginal rankings and best-cell markers.

    row_ranking is the rank row above the matrix (architectures averaged
    across encoders); column_ranking is the rank column at the left
    (encoders averaged across architectures). best_per_column maps each
    architecture to the encoders attaining its column maximum (more than
    one name only on an exact tie). best_overall is the grid argmax with
    ties broken by lexicographic (architecture, encoder) order.
    """

    grid: ScoreGrid
    metric_name: str
    row_ranking: tuple[tuple[str, float], ...]
    column_ranking: tuple[tuple[str, float], ...]
    best_per_column: dict[str, tuple[str, ...]]
    best_overall: tuple[str, str]


def build_heatmap(grid: ScoreGrid, metric_name: str = "iou") -> HeatmapSpec:
    """Compute marginal rankings and best-cell markers for a complete grid."""
    means = grid.mean_score
    row_ranking = tuple(average_rankings(grid, "architectures_over_encoders"))
    column_ranking = tuple(average_rankings(grid, "encoders_over_architectures"))

    best_per_column: dict[str, tuple[str, ...]] = {}
    for i, arch in enumerate(grid.architectures):
        column = means[i, :]
        top = column.max()
        best_per_column[arch] = tuple(
            enc for j, enc in enumerate(grid.encoders) if column[j] == top
        )

    top_overall = means.max()
    candidates = sorted(
        (arch, enc)
        for i, arch in enumerate(grid.architectures)
        for j, enc in enumerate(grid.encoders)
        if means[i, j] == top_overall
    )
    return HeatmapSpec(
        grid=grid,
        metric_name=metric_name,
        row_ranking=row_ranking,
        column_ranking=column_ranking,
        best_per_column=best_per_column,
        best_overall=candidates[0],
    )


def render(spec: HeatmapSpec | PairwiseMatrix, format: str, path: str | Path) -> Path:
    """Write one artifact file; returns the path written."""
    out = Path(path)
    if isinstance(spec, HeatmapSpec):
        writers = {
            "csv": _heatmap_csv,
            "json": _heatmap_json,
            "svg": _heatmap_svg,
        }
    elif isinstance(spec, PairwiseMatrix):
        writers = {
            "csv": _bayes_csv,
            "json": _bayes_json,
            "svg": _bayes_svg,
        }
    else:
        raise TypeError(f"cannot render object of type {type(spec).__name__}")
    if format not in writers:
        raise ValueError(f"unknown format {format!r}, expected one of {HEATMAP_FORMATS}")
    out.parent.mkdir(parents=True, exist_ok=True)
    writers[format](spec, out)
    return out


# ---------------------------------------------------------------------------
# heatmap renderers
# ---------------------------------------------------------------------------


def _heatmap_csv(spec: HeatmapSpec, out: Path) -> None:
    grid = spec.grid
    means = grid.mean_score
    enc_rank = dict(spec.column_ranking)
    arch_rank = dict(spec.row_ranking)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["encoder", "encoder_rank", *grid.architectures])
        writer.writerow(
            ["architecture_rank", "", *(repr(arch_rank[a]) for a in grid.architectures)]
        )
        for j, enc in enumerate(grid.encoders):
            writer.writerow(
                [enc, repr(enc_rank[enc]), *(repr(float(means[i, j])) for i in range(len(grid.architectures)))]
            )


def _heatmap_json(spec: HeatmapSpec, out: Path) -> None:
    grid = spec.grid
    payload = {
        "metric": spec.metric_name,
        "architectures": list(grid.architectures),
        "encoders": list(grid.encoders),
        "mean_score": [list(map(float, row)) for row in grid.mean_score],
        "per_fold": [
            [[float(v) for v in cell] for cell in row] for row in grid.per_fold
        ],
        "architecture_ranking": [list(pair) for pair in spec.row_ranking],
        "encoder_ranking": [list(pair) for pair in spec.column_ranking],
        "best_per_column": {a: list(e) for a, e in spec.best_per_column.items()},
        "best_overall": list(spec.best_overall),
    }
    with out.open("w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _green(t: float) -> tuple[int, int, int]:
    t = min(1.0, max(0.0, t))
    return tuple(
        int(round(lo + (hi - lo) * t)) for lo, hi in zip(_GREEN_LIGHT, _GREEN_DARK)
    )


def _luminance(rgb: tuple[int, int, int]) -> float:
    r, g, b = rgb
    return 0.2126 * r + 0.7152 * g + 0.0722 * b


def _shade(value: float, lo: float, hi: float, darker_is_higher: bool) -> tuple[int, int, int]:
    if hi == lo:
        t = 0.5
    else:
        t = (value - lo) / (hi - lo)
        if not darker_is_higher:
            t = 1.0 - t
    return _green(t)


def _fill(rgb: tuple[int, int, int]) -> str:
    return f"rgb({rgb[0]},{rgb[1]},{rgb[2]})"


def _text_colour(rgb: tuple[int, int, int]) -> str:
    return "#ffffff" if _luminance(rgb) < 140 else "#000000"


def _svg_rect(x: float, y: float, w: float, h: float, rgb: tuple[int, int, int], **data: str) -> str:
    attrs = " ".join(f"data-{k}={quoteattr(v)}" for k, v in data.items())
    return (
        f'<rect x="{x}" y="{y}" width="{w}" height="{h}" '
        f'fill="{_fill(rgb)}" stroke="#ffffff" {attrs}/>'
    )


def _svg_text(
    x: float,
    y: float,
    text: str,
    colour: str = "#000000",
    anchor: str = "middle",
    bold: bool = False,
    underline: bool = False,
) -> str:
    style = []
    if bold:
        style.append('font-weight="bold"')
    if underline:
        style.append('text-decoration="underline"')
    extra = (" " + " ".join(style)) if style else ""
    return (
        f'<text x="{x}" y="{y}" text-anchor="{anchor}" '
        f'dominant-baseline="middle" fill="{colour}" {_FONT}{extra}>'
        f"{escape(text)}</text>"
    )


def _heatmap_svg(spec: HeatmapSpec, out: Path) -> None:
    grid = spec.grid
    means = grid.mean_score
    archs = grid.architectures
    encs = grid.encoders
    enc_rank = dict(spec.column_ranking)
    arch_rank = dict(spec.row_ranking)

    score_lo, score_hi = float(means.min()), float(means.max())
    arch_ranks = [arch_rank[a] for a in archs]
    enc_ranks = [enc_rank[e] for e in encs]

    x0 = _LABEL_W + _RANK_W
    y0 = _TITLE_H + _NAME_H + _CELL_H
    width = x0 + _CELL_W * len(archs) + 8
    height = y0 + _CELL_H * len(encs) + 8

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        _svg_text(width / 2, _TITLE_H / 2, f"mean {spec.metric_name} per architecture and encoder", bold=True),
    ]

    for i, arch in enumerate(archs):
        cx = x0 + _CELL_W * i + _CELL_W / 2
        parts.append(_svg_text(cx, _TITLE_H + _NAME_H / 2, arch))
        rgb = _shade(arch_rank[arch], min(arch_ranks), max(arch_ranks), darker_is_higher=False)
        parts.append(
            _svg_rect(
                x0 + _CELL_W * i,
                _TITLE_H + _NAME_H,
                _CELL_W,
                _CELL_H,
                rgb,
                kind="rank-architecture",
                name=arch,
                value=repr(arch_rank[arch]),
            )
        )
        parts.append(
            _svg_text(cx, _TITLE_H + _NAME_H + _CELL_H / 2, f"{arch_rank[arch]:.2f}", _text_colour(rgb))
        )
    parts.append(_svg_text(x0 - 8, _TITLE_H + _NAME_H + _CELL_H / 2, "avg rank", anchor="end"))

    for j, enc in enumerate(encs):
        y = y0 + _CELL_H * j
        cy = y + _CELL_H / 2
        parts.append(_svg_text(_LABEL_W - 8, cy, enc, anchor="end"))
        rgb = _shade(enc_rank[enc], min(enc_ranks), max(enc_ranks), darker_is_higher=False)
        parts.append(
            _svg_rect(
                _LABEL_W,
                y,
                _RANK_W,
                _CELL_H,
                rgb,
                kind="rank-encoder",
                name=enc,
                value=repr(enc_rank[enc]),
            )
        )
        parts.append(_svg_text(_LABEL_W + _RANK_W / 2, cy, f"{enc_rank[enc]:.2f}", _text_colour(rgb)))

        for i, arch in enumerate(archs):
            v = float(means[i, j])
            rgb = _shade(v, score_lo, score_hi, darker_is_higher=True)
            parts.append(
                _svg_rect(
                    x0 + _CELL_W * i,
                    y,
                    _CELL_W,
                    _CELL_H,
                    rgb,
                    kind="score",
                    architecture=arch,
                    encoder=enc,
                    value=repr(v),
                )
            )
            parts.append(
                _svg_text(
                    x0 + _CELL_W * i + _CELL_W / 2,
                    cy,
                    f"{v:.3f}",
                    _text_colour(rgb),
                    bold=(arch, enc) == spec.best_overall,
                    underline=enc in spec.best_per_column[arch],
                )
            )

    parts.append("</svg>")
    out.write_text("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# Bayesian matrix renderers
# ---------------------------------------------------------------------------

_BAYES_COLUMNS = (
    "row_method",
    "col_method",
    "p_row_better",
    "p_rope",
    "p_col_better",
    "mc_row_better",
    "mc_rope",
    "mc_col_better",
)


def _bayes_cell_row(matrix: PairwiseMatrix, i: int, j: int) -> list[str]:
    cell = matrix.cells[(i, j)]
    # cell compares row (a) against column (b); x = a - b, so p_right is
    # the row-better mass and p_left the column-better mass.
    return [
        matrix.names[i],
        matrix.names[j],
        repr(cell.cf_right),
        repr(cell.cf_rope),
        repr(cell.cf_left),
        repr(cell.p_right),
        repr(cell.p_rope),
        repr(cell.p_left),
    ]


def _bayes_csv(matrix: PairwiseMatrix, out: Path) -> None:
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_BAYES_COLUMNS)
        for i in range(len(matrix.names)):
            for j in range(len(matrix.names)):
                if i == j:
                    continue
                writer.writerow(_bayes_cell_row(matrix, i, j))


def _bayes_cell_payload(cell: BayesResult) -> dict:
    return {
        "p_row_better": cell.cf_right,
        "p_rope": cell.cf_rope,
        "p_col_better": cell.cf_left,
        "mc_row_better": cell.p_right,
        "mc_rope": cell.p_rope,
        "mc_col_better": cell.p_left,
        "rope": cell.rope,
        "rho": cell.rho,
        "n_samples": cell.n_samples,
        "seed": cell.seed,
        "posterior_df": cell.posterior_df,
        "posterior_loc": cell.posterior_loc,
        "posterior_scale": cell.posterior_scale,
    }


def _bayes_json(matrix: PairwiseMatrix, out: Path) -> None:
    payload = {
        "methods": list(matrix.names),
        "cells": [
            {
                "row": matrix.names[i],
                "col": matrix.names[j],
                **_bayes_cell_payload(matrix.cells[(i, j)]),
            }
            for i in range(len(matrix.names))
            for j in range(len(matrix.names))
            if i != j
        ],
    }
    with out.open("w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _bayes_svg(matrix: PairwiseMatrix, out: Path) -> None:
    names = matrix.names
    n = len(names)
    x0 = _LABEL_W
    y0 = _TITLE_H + _NAME_H
    width = x0 + _CELL_W * n + 8
    height = y0 + _CELL_H * n + 8

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        _svg_text(width / 2, _TITLE_H / 2, "row better (top) vs column better (bottom)", bold=True),
    ]
    for i, name in enumerate(names):
        parts.append(_svg_text(x0 + _CELL_W * i + _CELL_W / 2, _TITLE_H + _NAME_H / 2, name))
    for r, row_name in enumerate(names):
        y = y0 + _CELL_H * r
        parts.append(_svg_text(x0 - 8, y + _CELL_H / 2, row_name, anchor="end"))
        for c, col_name in enumerate(names):
            x = x0 + _CELL_W * c
            if r == c:
                parts.append(
                    _svg_rect(x, y, _CELL_W, _CELL_H, _DIAGONAL_GREY, kind="diagonal")
                )
                continue
            cell = matrix.cells[(r, c)]
            diff = cell.cf_right - cell.cf_left
            rgb = _shade(diff, -1.0, 1.0, darker_is_higher=True)
            colour = _text_colour(rgb)
            parts.append(
                _svg_rect(
                    x,
                    y,
                    _CELL_W,
                    _CELL_H,
                    rgb,
                    kind="bayes",
                    row=row_name,
                    col=col_name,
                    value=repr(diff),
                )
            )
            parts.append(
                _svg_text(x + _CELL_W / 2, y + _CELL_H * 0.3, f"{cell.cf_right:.3f}", colour)
            )
            parts.append(
                _svg_text(x + _CELL_W / 2, y + _CELL_H * 0.72, f"{cell.cf_left:.3f}", colour)
            )
    parts.append("</svg>")
    out.write_text("\n".join(parts) + "\n")
