"""In-memory raster types and file I/O shared by the whole pipeline.

All rasters are row-major: pixel (i=row, j=col) lives at array index
[i, j]. Arrays are frozen (read-only) after construction, so raster
objects can be shared across worker threads without copying.

Probability rasters are stored on disk as 16-bit single-channel PNG with
the quantisation v16 = round(v * 65535); loading inverts it, so one
round trip costs at most 1/131070 per pixel and a second round trip is
bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError


class ImageFormatError(Exception):
    """Raised when a file exists but cannot be decoded as the expected image kind."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    if out is arr:
        out = arr.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class RgbRaster:
    """8-bit RGB image, shape (height, width, 3), dtype uint8."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.pixels)
        if p.ndim != 3 or p.shape[2] != 3:
            raise ValueError(f"RGB raster must have shape (h, w, 3), got {p.shape}")
        if p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError("raster dimensions must be positive")
        object.__setattr__(self, "pixels", _freeze(p.astype(np.uint8, copy=False)))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class BinaryRaster:
    """Boolean mask, shape (height, width). True marks foreground."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.bits)
        if b.ndim != 2:
            raise ValueError(f"binary raster must have shape (h, w), got {b.shape}")
        if b.shape[0] < 1 or b.shape[1] < 1:
            raise ValueError("raster dimensions must be positive")
        object.__setattr__(self, "bits", _freeze(b.astype(bool, copy=False)))

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]


@dataclass(frozen=True)
class ProbRaster:
    """Per-pixel probabilities in [0, 1], shape (height, width), float64."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"probability raster must have shape (h, w), got {v.shape}")
        if v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("raster dimensions must be positive")
        if np.isnan(v).any():
            raise ValueError("probability raster contains NaN")
        if v.min() < 0.0 or v.max() > 1.0:
            raise ValueError("probability raster values must lie in [0, 1]")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def _open_image(path: str | Path) -> Image.Image:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"image file not found: {p}")
    try:
        img = Image.open(p)
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ImageFormatError(f"cannot decode {p}: {exc}") from exc
    return img


def load_rgb(path: str | Path) -> RgbRaster:
    """Decode an RGB image file (PNG, JPEG, ...) to exact stored byte values."""
    img = _open_image(path)
    if img.mode != "RGB":
        img = img.convert("RGB")
    return RgbRaster(np.asarray(img, dtype=np.uint8))


def save_prob(raster: ProbRaster, path: str | Path) -> None:
    """Store a probability raster as 16-bit single-channel PNG."""
    v = raster.values
    if v.min() < 0.0 or v.max() > 1.0:
        raise ValueError("probability values out of [0, 1]")
    q = np.rint(v * 65535.0).astype(np.uint16)
    Image.fromarray(q).save(Path(path), format="PNG")


def load_prob(path: str | Path) -> ProbRaster:
    """Load a 16-bit single-channel PNG back into a probability raster."""
    img = _open_image(path)
    if img.mode not in ("I", "I;16"):
        raise ImageFormatError(
            f"expected 16-bit single-channel image, got mode {img.mode!r} in {path}"
        )
    q = np.asarray(img, dtype=np.float64)
    if q.min() < 0 or q.max() > 65535:
        raise ImageFormatError(f"16-bit sample values out of range in {path}")
    return ProbRaster(q / 65535.0)


def save_mask(mask: BinaryRaster, path: str | Path) -> None:
    """Store a binary mask as 8-bit PNG (0 = false, 255 = true)."""
    arr = np.where(mask.bits, 255, 0).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(Path(path), format="PNG")


def load_mask(path: str | Path) -> BinaryRaster:
    """Load an 8-bit PNG mask; any sample above 127 counts as true."""
    img = _open_image(path)
    if img.mode == "1":
        return BinaryRaster(np.asarray(img, dtype=bool))
    if img.mode != "L":
        raise ImageFormatError(f"expected single-channel mask, got mode {img.mode!r} in {path}")
    return BinaryRaster(np.asarray(img, dtype=np.uint8) > 127)
