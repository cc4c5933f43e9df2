"""Whole-system checks with frozen tolerances.

Each test is one headline guarantee of the package; the terminal summary
prints a pass/fail line per check at the end of the run (conftest.py).
Every expected value is either computed by an independent oracle in this
file or read from the committed golden outputs under tests/data/golden,
which tests/data/make_fixtures.py regenerates and self-verifies.
"""

from __future__ import annotations

import importlib.util
import json
import math
import shutil
import time
from pathlib import Path

import numpy as np

from trailbench.cli import main as cli_main
from trailbench.colour import ReferenceColour, hsi_distance_image, hsi_image
from trailbench.extract import ExtractionConfig, extract_centreline
from trailbench.folds import load_manifest, make_folds, validate_manifest
from trailbench.metrics import ConfusionCounts, metric_set
from trailbench.raster import BinaryRaster, ProbRaster, RgbRaster, load_prob, save_prob
from trailbench.softmask import DistanceField, distance_transform, gaussian_mask
from trailbench.stats import correlated_bayes_ttest, rank_with_ties

DATA_DIR = Path(__file__).resolve().parent / "data"
PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

_spec = importlib.util.spec_from_file_location("fixture_gen", DATA_DIR / "make_fixtures.py")
fixture_gen = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(fixture_gen)


def _bruteforce_sqdist(bits: np.ndarray) -> np.ndarray:
    """Integer squared distance to the nearest true pixel, one row at a time."""
    h, w = bits.shape
    ys, xs = (idx.astype(np.int64) for idx in np.nonzero(bits))
    dx2 = (np.arange(w, dtype=np.int64)[:, None] - xs[None, :]) ** 2
    out = np.empty((h, w), dtype=np.int64)
    for y in range(h):
        out[y] = (dx2 + ((y - ys) ** 2)[None, :]).min(axis=1)
    return out


def test_distance_transform_matches_bruteforce_exactly():
    rng = np.random.default_rng(99)
    start = time.perf_counter()
    for _ in range(200):
        h = int(rng.integers(1, 65))
        w = int(rng.integers(1, 65))
        density = float(rng.uniform(0.01, 0.99))
        bits = rng.random((h, w)) < density
        if not bits.any():
            bits[rng.integers(0, h), rng.integers(0, w)] = True
        got = distance_transform(BinaryRaster(bits)).d
        expected = np.sqrt(_bruteforce_sqdist(bits).astype(np.float64))
        assert np.array_equal(got, expected)  # bit-for-bit, no tolerance
    assert time.perf_counter() - start < 10.0


def test_gaussian_soft_mask_hits_pinned_values():
    values = gaussian_mask(DistanceField(np.array([[0.0, 16.0, 32.0]])), sigma=16.0).values
    assert abs(values[0, 0] - 1.0) <= 1e-12
    assert abs(values[0, 1] - math.exp(-1.0)) <= 1e-12
    assert abs(values[0, 2] - math.exp(-4.0)) <= 1e-12
    for sigma in (0.5, 3.0, 7.25):  # the e^-1 point is width-independent
        v = gaussian_mask(DistanceField(np.array([[sigma]])), sigma=sigma).values[0, 0]
        assert abs(v - math.exp(-1.0)) <= 1e-12


def test_metric_identities_hold_on_random_counts():
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        tp = int(rng.integers(1, 10_000))
        fp, tn, fn = (int(v) for v in rng.integers(0, 10_000, size=3))
        ms = metric_set(ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn))
        assert abs(ms.f1 - 2 * ms.iou / (1 + ms.iou)) <= 1e-12
        swapped = metric_set(ConfusionCounts(tp=tp, fp=fn, tn=tn, fn=fp))
        assert swapped.precision == ms.recall
        assert swapped.recall == ms.precision
        assert swapped.iou == ms.iou
        assert abs(swapped.f1 - ms.f1) <= 1e-12


def test_fold_protocol_produces_80_10_10_split():
    ids = [f"img{i:03d}" for i in range(100)]
    manifest = make_folds(ids, 10, seed=0)
    tested = []
    for fold in manifest.folds:
        assert (len(fold.train), len(fold.val), len(fold.test)) == (80, 10, 10)
        tested.extend(fold.test)
    assert sorted(tested) == sorted(ids)  # every item tested exactly once
    assert validate_manifest(manifest) == []


def test_tied_leaders_rank_one_point_five():
    assert rank_with_ties([0.9, 0.9, 0.5]) == [1.5, 1.5, 3.0]
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 40))
        scores = list(np.round(rng.random(n), 1))  # coarse grid forces ties
        assert sum(rank_with_ties(scores)) == n * (n + 1) / 2


def test_bayes_monte_carlo_matches_closed_form():
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        a = rng.normal(0.7, 0.05, size=10)
        b = a - rng.normal(0.0, 0.02, size=10) - rng.uniform(-0.02, 0.04)
        r = correlated_bayes_ttest(a, b, rope=0.01, n_samples=50_000, seed=seed)
        for mc, cf in ((r.p_left, r.cf_left), (r.p_rope, r.cf_rope), (r.p_right, r.cf_right)):
            worst = max(worst, abs(mc - cf))
    assert worst <= 0.01

    rng = np.random.default_rng(555)
    a = rng.normal(0.6, 0.05, size=10)
    same = correlated_bayes_ttest(a, a.copy(), rope=0.01, n_samples=50_000, seed=3)
    assert (same.p_left, same.p_rope, same.p_right) == (0.0, 1.0, 0.0)
    assert (same.cf_left, same.cf_rope, same.cf_right) == (0.0, 1.0, 0.0)

    for seed in range(10):
        rng = np.random.default_rng(1000 + seed)
        a = rng.normal(0.6, 0.05, size=10)
        b = rng.normal(0.55, 0.05, size=10)
        fwd = correlated_bayes_ttest(a, b, rope=0.01, n_samples=50_000, seed=42)
        rev = correlated_bayes_ttest(b, a, rope=0.01, n_samples=50_000, seed=42)
        assert (rev.cf_left, rev.cf_rope, rev.cf_right) == (fwd.cf_right, fwd.cf_rope, fwd.cf_left)
        assert abs(rev.p_left - fwd.p_right) <= 0.01
        assert abs(rev.p_right - fwd.p_left) <= 0.01


def _run_fixture_pipeline(out_dir: Path) -> None:
    fixtures = DATA_DIR / "fixtures"
    fixture_gen.run_pipeline(out_dir, fixtures / "config.json")
    code = cli_main(
        [
            "report",
            "--config",
            str(fixtures / "config.json"),
            "--dataset-root",
            str(fixtures),
            "--out",
            str(out_dir),
        ]
    )
    assert code == 0


def test_pipeline_reproduces_golden_outputs(tmp_path):
    golden = DATA_DIR / "golden"
    out1, out2 = tmp_path / "run1", tmp_path / "run2"
    _run_fixture_pipeline(out1)
    _run_fixture_pipeline(out2)

    rel_paths = sorted(p.relative_to(golden) for p in golden.rglob("*") if p.is_file())
    assert rel_paths
    for rel in rel_paths:
        assert (out1 / rel).read_bytes() == (golden / rel).read_bytes(), str(rel)

    tree1 = {p.relative_to(out1): p.read_bytes() for p in sorted(out1.rglob("*")) if p.is_file()}
    tree2 = {p.relative_to(out2): p.read_bytes() for p in sorted(out2.rglob("*")) if p.is_file()}
    assert tree1 == tree2  # reruns byte-identical, rendered figures included

    for name in ("heatmap_iou.png", "heatmap_f1.png", "bayes.png"):
        assert (out1 / "report" / name).read_bytes()[:8] == PNG_MAGIC

    # a prediction equal to the groundtruth scores 1.0; its inversion 0.0
    out3 = tmp_path / "oracle"
    shutil.copytree(out1 / "gt", out3 / "gt")
    shutil.copy(out1 / "folds.json", out3 / "folds.json")
    manifest = load_manifest(out3 / "folds.json")
    for model, fn in {"oracle__copy": lambda v: v, "oracle__inv": lambda v: 1.0 - v}.items():
        for f, fold in enumerate(manifest.folds):
            dest = out3 / "preds" / model / f"fold{f}"
            dest.mkdir(parents=True, exist_ok=True)
            for image_id in fold.test:
                values = load_prob(out3 / "gt" / "soft" / f"{image_id}.png").values
                save_prob(ProbRaster(fn(values)), dest / f"{image_id}.png")
    code = cli_main(
        [
            "evaluate",
            "--config",
            str(DATA_DIR / "fixtures" / "config.json"),
            "--dataset-root",
            str(DATA_DIR / "fixtures"),
            "--out",
            str(out3),
        ]
    )
    assert code == 0
    payload = json.loads((out3 / "metrics" / "metrics.json").read_text())
    assert len(payload["per_image"]) == 2 * len(manifest.items)
    for row in payload["per_image"]:
        assert row["iou"] == (1.0 if row["encoder"] == "copy" else 0.0)


def test_extraction_is_monotone_in_threshold():
    rng = np.random.default_rng(321)
    ref = ReferenceColour(h=1 / 6, s=1.0, i=2 / 3)
    for _ in range(50):
        h = int(rng.integers(4, 49))
        w = int(rng.integers(4, 49))
        pixels = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
        pixels[int(rng.integers(0, h))] = (255, 255, 0)  # one drawn stroke row
        img = RgbRaster(pixels)

        prev = None
        for th in np.sort(rng.uniform(0.01, 1.2, size=5)):
            cfg = ExtractionConfig(ref=ref, threshold=float(th), normalise=True)
            mask = extract_centreline(img, cfg).bits
            if prev is not None:
                assert not (prev & ~mask).any()  # lower threshold marks a subset
            prev = mask

        dist = hsi_distance_image(hsi_image(img.pixels), ref)
        assert float((dist / dist.max()).max()) <= 1.0
        above_one = ExtractionConfig(ref=ref, threshold=1.0000001, normalise=True)
        assert extract_centreline(img, above_one).bits.all()
