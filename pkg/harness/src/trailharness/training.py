"""Model-backed trials. Import this module only when actually training:
it pulls in torch and segmentation-models-pytorch.

Inputs are resized to the groundtruth resolution and edge-padded to a
multiple of 32 (the deepest encoder stride); predictions are cropped
back before export. Targets are the soft masks themselves, so both
losses operate on probabilities rather than hard labels.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image

import segmentation_models_pytorch as smp

from trailbench.raster import load_rgb

from .registry import resolve_architecture, resolve_encoder
from .runner import TrialFailed, _gt_soft, find_image
from .trial import TrialSpec

_STRIDE = 32


@dataclass(frozen=True)
class TrainResult:
    final_val_loss: float
    predictions: dict[str, np.ndarray]


def _pad_to_stride(arr: np.ndarray) -> np.ndarray:
    h, w = arr.shape[-2:]
    ph = (-h) % _STRIDE
    pw = (-w) % _STRIDE
    if ph == 0 and pw == 0:
        return arr
    pad = [(0, 0)] * (arr.ndim - 2) + [(0, ph), (0, pw)]
    return np.pad(arr, pad, mode="edge")


def _load_pair(
    dataset_root: Path, run_dir: Path, image_id: str
) -> tuple[np.ndarray, np.ndarray, tuple[int, int]]:
    """Input tensor (3,H,W), target (1,H,W), both padded; plus true dims."""
    gt = _gt_soft(run_dir, image_id).values
    rgb = load_rgb(find_image(dataset_root, image_id)).pixels
    h, w = gt.shape
    resized = Image.fromarray(rgb, "RGB").resize((w, h), Image.BILINEAR)
    x = np.asarray(resized, dtype=np.float32).transpose(2, 0, 1) / 255.0
    y = gt.astype(np.float32)[None, :, :]
    return _pad_to_stride(x), _pad_to_stride(y), (h, w)


def _dice_loss(logits: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    prob = torch.sigmoid(logits)
    inter = (prob * target).sum()
    return 1.0 - (2.0 * inter + 1.0) / (prob.sum() + target.sum() + 1.0)


def _loss_fn(name: str):
    if name == "dice":
        return _dice_loss
    return torch.nn.BCEWithLogitsLoss()


def _batches(items: list, size: int):
    """Group same-shaped tensors into stacks of at most `size`."""
    by_shape: dict[tuple, list] = {}
    for x, y in items:
        by_shape.setdefault(x.shape, []).append((x, y))
    for group in by_shape.values():
        for start in range(0, len(group), size):
            chunk = group[start : start + size]
            xs = torch.stack([torch.from_numpy(x) for x, _ in chunk])
            ys = torch.stack([torch.from_numpy(y) for _, y in chunk])
            yield xs, ys


def run_trial(
    spec: TrialSpec,
    dataset_root: Path,
    run_dir: Path,
    fold,
    device: str = "cpu",
) -> TrainResult:
    _, model_id = resolve_architecture(spec.architecture)
    _, encoder_id = resolve_encoder(spec.encoder)

    torch.manual_seed(zlib.crc32(f"{spec.model_dir_name}/fold{spec.fold}".encode()))
    model = smp.create_model(
        arch=model_id,
        encoder_name=encoder_id,
        encoder_weights=None,  # offline: no pretrained download
        in_channels=3,
        classes=1,
    ).to(device)

    train_pairs = [_load_pair(dataset_root, run_dir, i)[:2] for i in fold.train]
    val_pairs = [_load_pair(dataset_root, run_dir, i)[:2] for i in fold.val]
    loss_fn = _loss_fn(spec.loss)
    optimiser = torch.optim.Adam(model.parameters(), lr=spec.learning_rate)

    model.train()
    for _ in range(spec.epochs):
        for xs, ys in _batches(train_pairs, spec.batch_size):
            optimiser.zero_grad()
            loss = loss_fn(model(xs.to(device)), ys.to(device))
            loss.backward()
            optimiser.step()

    model.eval()
    with torch.no_grad():
        losses = [
            float(loss_fn(model(xs.to(device)), ys.to(device)))
            for xs, ys in _batches(val_pairs, spec.batch_size)
        ]
        final_val_loss = float(np.mean(losses)) if losses else float("nan")
        if not np.isfinite(final_val_loss):
            raise TrialFailed(f"validation loss is not finite: {final_val_loss}")

        predictions: dict[str, np.ndarray] = {}
        for image_id in fold.test:
            x, _, (h, w) = _load_pair(dataset_root, run_dir, image_id)
            logits = model(torch.from_numpy(x)[None].to(device))
            prob = torch.sigmoid(logits)[0, 0, :h, :w].cpu().numpy()
            predictions[image_id] = np.clip(prob.astype(np.float64), 0.0, 1.0)

    return TrainResult(final_val_loss=final_val_loss, predictions=predictions)
