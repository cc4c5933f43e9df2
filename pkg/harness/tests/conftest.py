"""Shared fixtures: a tiny benchmark run built once, cloned per test.

Images are flat backgrounds with one pure-yellow row, so centreline
extraction recovers the stroke exactly and oracle predictions score
perfectly.
"""

from __future__ import annotations

import json
import shutil
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest
from PIL import Image

from trailbench.cli import main as bench_main

YELLOW_HSI = {"h": 1 / 6, "s": 1.0, "i": 2 / 3}
_BACKGROUNDS = [(30, 110, 40), (110, 70, 30), (90, 90, 90)]


def write_dataset(root: Path, n: int = 6) -> Path:
    ann = root / "annotated"
    ann.mkdir(parents=True, exist_ok=True)
    for idx in range(n):
        arr = np.zeros((16, 24, 3), dtype=np.uint8)
        arr[:, :] = _BACKGROUNDS[idx % len(_BACKGROUNDS)]
        arr[3 + 2 * (idx % 5), 2:22] = (255, 255, 0)
        Image.fromarray(arr, "RGB").save(ann / f"img{idx:02d}.png")
    return ann


def write_config(path: Path, dataset_root: Path, out_dir: Path, **extra) -> Path:
    payload = {
        "dataset_root": str(dataset_root),
        "out_dir": str(out_dir),
        "reference_colour": YELLOW_HSI,
        "sigma": 4.0,
        "downscale": 2,
        "k": 3,
        "fold_seed": 7,
    }
    payload.update(extra)
    path.write_text(json.dumps(payload))
    return path


@pytest.fixture(scope="session")
def base(tmp_path_factory):
    """Dataset plus a pristine run directory (groundtruth and manifest only)."""
    root = tmp_path_factory.mktemp("harness-base")
    dataset = root / "dataset"
    write_dataset(dataset)
    run = root / "run"
    cfg = write_config(root / "config.json", dataset, run)
    assert bench_main(["make-gt", "--config", str(cfg)]) == 0
    assert bench_main(["split", "--config", str(cfg)]) == 0
    return SimpleNamespace(root=root, dataset=dataset, run=run, config=cfg)


@pytest.fixture
def workspace(base, tmp_path):
    """Fresh copy of the pristine run so tests never share prediction state."""
    run = tmp_path / "run"
    shutil.copytree(base.run, run)
    cfg = write_config(tmp_path / "config.json", base.dataset, run)
    return SimpleNamespace(root=tmp_path, dataset=base.dataset, run=run, config=cfg)
