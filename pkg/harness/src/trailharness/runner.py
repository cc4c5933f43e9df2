"""Trial execution: oracle shortcuts, model training, prediction export.

Predictions land in the layout the evaluator consumes:

    <run>/preds/<architecture>__<encoder>/fold<f>/<image_id>.png

plus a trial.json next to them recording the settings and the final
validation loss. The oracle and constant-zero modes exist so the whole
contract can be exercised without the model ecosystem installed; they
import nothing heavier than numpy.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from trailbench.folds import FoldManifest, load_manifest
from trailbench.raster import ProbRaster, load_prob, save_prob

from .trial import TrialSpec

MODES = ("model", "oracle", "zero")

_IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".tif", ".tiff", ".bmp")


class HarnessDataError(Exception):
    """Missing or malformed inputs (manifest, images, groundtruth)."""


class TrialFailed(Exception):
    """Training ran but did not produce a usable model."""


def find_image(dataset_root: Path, image_id: str) -> Path:
    annotated = dataset_root / "annotated"
    for suffix in _IMAGE_SUFFIXES:
        candidate = annotated / f"{image_id}{suffix}"
        if candidate.is_file():
            return candidate
    raise HarnessDataError(f"no input image for id {image_id!r} under {annotated}")


def _load_manifest_fold(run_dir: Path, fold_index: int) -> tuple[FoldManifest, Any]:
    manifest_path = run_dir / "folds.json"
    try:
        manifest = load_manifest(manifest_path)
    except FileNotFoundError as exc:
        raise HarnessDataError(f"fold manifest not found: {manifest_path}") from exc
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise HarnessDataError(f"fold manifest unreadable: {exc}") from exc
    if not 0 <= fold_index < manifest.k:
        raise HarnessDataError(
            f"fold index {fold_index} out of range for a {manifest.k}-fold manifest"
        )
    return manifest, manifest.folds[fold_index]


def _gt_soft(run_dir: Path, image_id: str) -> ProbRaster:
    path = run_dir / "gt" / "soft" / f"{image_id}.png"
    try:
        return load_prob(path)
    except FileNotFoundError as exc:
        raise HarnessDataError(f"groundtruth soft mask missing: {path}") from exc


def train_and_predict(
    spec: TrialSpec,
    dataset_root: Path,
    run_dir: Path,
    mode: str = "model",
    device: str = "cpu",
) -> dict[str, Any]:
    """Run one trial and write predictions for the fold's test images.

    Returns the trial log (also written as trial.json in the fold
    directory). In "model" mode the model ecosystem is imported lazily;
    "oracle" re-emits the stored groundtruth and "zero" writes empty
    predictions, neither touching it.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    _, fold = _load_manifest_fold(run_dir, spec.fold)

    dest = run_dir / "preds" / spec.model_dir_name / f"fold{spec.fold}"
    dest.mkdir(parents=True, exist_ok=True)

    log: dict[str, Any] = {
        **spec.as_dict(),
        "mode": mode,
        "status": "completed",
        "final_val_loss": None,
        "n_predictions": len(fold.test),
    }

    try:
        if mode == "oracle":
            for image_id in fold.test:
                save_prob(_gt_soft(run_dir, image_id), dest / f"{image_id}.png")
        elif mode == "zero":
            for image_id in fold.test:
                gt = _gt_soft(run_dir, image_id)
                save_prob(ProbRaster(np.zeros_like(gt.values)), dest / f"{image_id}.png")
        else:
            from . import training  # model ecosystem stays out of oracle paths

            for image_id in [*fold.train, *fold.val, *fold.test]:
                find_image(dataset_root, image_id)  # fail before training starts
            result = training.run_trial(spec, dataset_root, run_dir, fold, device=device)
            log["final_val_loss"] = result.final_val_loss
            for image_id, values in result.predictions.items():
                save_prob(ProbRaster(values), dest / f"{image_id}.png")
    except TrialFailed as exc:
        log["status"] = "failed"
        log["error"] = str(exc)
        _write_log(dest, log)
        raise
    _write_log(dest, log)
    return log


def _write_log(dest: Path, log: dict[str, Any]) -> None:
    with (dest / "trial.json").open("w") as fh:
        json.dump(log, fh, indent=2)
        fh.write("\n")
    if log["status"] == "failed":
        print(f"trial failed: {log.get('error', 'unknown error')}", file=sys.stderr)
