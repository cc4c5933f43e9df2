import numpy as np

from trailbench import figures
from trailbench.report import build_heatmap
from trailbench.stats import ScoreGrid, pairwise_matrix

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_heatmap_png_writes_png(tmp_path, rng):
    per_fold = rng.random((3, 4, 5))
    g = ScoreGrid(("a0", "a1", "a2"), ("e0", "e1", "e2", "e3"), per_fold)
    out = figures.heatmap_png(build_heatmap(g), tmp_path / "h.png")
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_bayes_png_writes_png(tmp_path, rng):
    methods = [(f"m{i}", list(rng.normal(i / 10, 0.01, size=8))) for i in range(3)]
    matrix = pairwise_matrix(methods, n_samples=1000, seed=1)
    out = figures.bayes_png(matrix, tmp_path / "b.png")
    assert out.read_bytes()[:8] == PNG_MAGIC
