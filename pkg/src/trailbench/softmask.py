"""Probabilistic groundtruth from centreline masks.

The distance transform here is the exact two-pass separable
lower-envelope algorithm on squared distances: first a per-row 1-D
sweep, then a per-column lower envelope of parabolas. All intermediate
squared distances are integers represented exactly in float64, so the
result equals a brute-force nearest-pixel search bit for bit.

The soft mask maps each distance d through exp(-d^2 / sigma^2), giving 1
on the centreline and decaying towards 0; the choice 2*sigma + 1 pixels
roughly matches the typical drawn-path width. Downscaling is plain block
averaging (area mean), with partial edge blocks averaged over the pixels
they actually contain.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .raster import BinaryRaster, ProbRaster, RgbRaster

PipelineOrder = Literal["mask_then_downscale", "downscale_then_mask"]


class EmptyCentrelineWarning(UserWarning):
    """The centreline mask has no true pixel; distances are infinite."""


@dataclass(frozen=True)
class DistanceField:
    """Per-pixel Euclidean distance (in pixels) to the nearest centreline pixel.

    An empty source mask yields +inf everywhere; `has_source` is False in
    that case.
    """

    d: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.d, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"distance field must have shape (h, w), got {arr.shape}")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "d", arr)

    @property
    def has_source(self) -> bool:
        return bool(np.isfinite(self.d).any())


@dataclass(frozen=True)
class SoftMaskConfig:
    """Smoothing width, downscale factor and pipeline order for mask generation."""

    sigma: float = 16.0
    downscale: int = 8
    order: PipelineOrder = "mask_then_downscale"

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.downscale < 1:
            raise ValueError(f"downscale factor must be >= 1, got {self.downscale}")
        if self.order not in ("mask_then_downscale", "downscale_then_mask"):
            raise ValueError(f"unknown pipeline order {self.order!r}")


def _lower_envelope(f: np.ndarray) -> np.ndarray:
    """1-D squared-distance transform: min_j ((i - j)^2 + f[j]) for every i."""
    n = f.shape[0]
    out = np.full(n, np.inf)
    sites = np.flatnonzero(np.isfinite(f))
    if sites.size == 0:
        return out

    v = np.empty(sites.size, dtype=np.int64)  # parabola apex positions
    z = np.empty(sites.size + 1)  # envelope segment boundaries
    k = 0
    v[0] = sites[0]
    z[0] = -np.inf
    z[1] = np.inf
    for q in sites[1:]:
        fq = f[q]
        while True:
            p = v[k]
            s = ((fq + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
            if s <= z[k]:
                k -= 1
            else:
                break
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = np.inf

    k = 0
    for i in range(n):
        while z[k + 1] < i:
            k += 1
        di = i - v[k]
        out[i] = di * di + f[v[k]]
    return out


def _edt_squared(bits: np.ndarray) -> np.ndarray:
    """Exact squared Euclidean distance to the nearest true pixel."""
    h, w = bits.shape
    # Row pass: 1-D pixel distance within each row (two sweeps over columns).
    d = np.where(bits, 0.0, np.inf)
    for j in range(1, w):
        d[:, j] = np.minimum(d[:, j], d[:, j - 1] + 1.0)
    for j in range(w - 2, -1, -1):
        d[:, j] = np.minimum(d[:, j], d[:, j + 1] + 1.0)
    dsq = d * d

    # Column pass: lower envelope of parabolas rooted at the row distances.
    out = np.empty((h, w))
    for j in range(w):
        out[:, j] = _lower_envelope(dsq[:, j])
    return out


def distance_transform(c: BinaryRaster) -> DistanceField:
    """Exact Euclidean distance transform of a centreline mask.

    Runs in O(width * height). An empty mask produces an all-infinity
    field and a warning; the downstream soft mask is then all zeros.
    """
    if not c.bits.any():
        warnings.warn(
            "centreline mask is empty; soft mask will be all zeros",
            EmptyCentrelineWarning,
            stacklevel=2,
        )
        return DistanceField(np.full(c.bits.shape, np.inf))
    return DistanceField(np.sqrt(_edt_squared(c.bits)))


def gaussian_mask(field: DistanceField, sigma: float) -> ProbRaster:
    """Map distances through exp(-d^2 / sigma^2) into a probability raster."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    d = field.d
    with np.errstate(invalid="ignore"):
        m = np.exp(-(d * d) / (sigma * sigma))
    m[~np.isfinite(d)] = 0.0
    return ProbRaster(m)


def _block_mean(values: np.ndarray, factor: int) -> np.ndarray:
    """Area-average reduction by `factor` along the first two axes."""
    h, w = values.shape[:2]
    row_idx = np.arange(0, h, factor)
    col_idx = np.arange(0, w, factor)
    sums = np.add.reduceat(np.add.reduceat(values, row_idx, axis=0), col_idx, axis=1)
    row_sizes = np.minimum(row_idx + factor, h) - row_idx
    col_sizes = np.minimum(col_idx + factor, w) - col_idx
    counts = np.outer(row_sizes, col_sizes).astype(np.float64)
    if values.ndim == 3:
        counts = counts[:, :, None]
    return sums / counts


def downscale(raster: ProbRaster | RgbRaster, factor: int) -> ProbRaster | RgbRaster:
    """Block-mean downscale; output dims are ceil(dims / factor).

    Edge blocks that do not divide evenly are averaged over the pixels
    they contain. RGB rasters are averaged per channel and rounded back
    to bytes.
    """
    if factor < 1:
        raise ValueError(f"downscale factor must be >= 1, got {factor}")
    if isinstance(raster, ProbRaster):
        if factor == 1:
            return raster
        mean = _block_mean(raster.values, factor)
        return ProbRaster(np.clip(mean, 0.0, 1.0))
    if isinstance(raster, RgbRaster):
        if factor == 1:
            return raster
        mean = _block_mean(raster.pixels.astype(np.float64), factor)
        return RgbRaster(np.clip(np.rint(mean), 0, 255).astype(np.uint8))
    raise TypeError(f"cannot downscale {type(raster).__name__}")


def _block_any(c: BinaryRaster, factor: int) -> BinaryRaster:
    """Downscale a binary mask: a block is true iff any pixel in it is.

    Mean-pooling would erase one-pixel-wide lines, so reduced-resolution
    centrelines keep every block the line passes through.
    """
    bits = c.bits.astype(np.int64)
    h, w = bits.shape
    row_idx = np.arange(0, h, factor)
    col_idx = np.arange(0, w, factor)
    sums = np.add.reduceat(np.add.reduceat(bits, row_idx, axis=0), col_idx, axis=1)
    return BinaryRaster(sums > 0)


def soft_mask_from_centreline(c: BinaryRaster, cfg: SoftMaskConfig) -> ProbRaster:
    """Centreline mask -> distance field -> Gaussian soft mask -> downscale.

    With order "downscale_then_mask" the centreline itself is reduced
    first (block-OR) and the Gaussian is applied at the low resolution;
    sigma is then in low-resolution pixel units.
    """
    if cfg.order == "downscale_then_mask":
        reduced = _block_any(c, cfg.downscale) if cfg.downscale > 1 else c
        return gaussian_mask(distance_transform(reduced), cfg.sigma)
    field = distance_transform(c)
    mask = gaussian_mask(field, cfg.sigma)
    if cfg.downscale > 1:
        mask = downscale(mask, cfg.downscale)
    return mask
