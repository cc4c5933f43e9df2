"""Centreline extraction: annotated RGB image -> binary centreline mask.

Every pixel is converted to HSI and its Euclidean distance to the
configured reference colour is computed. With normalisation enabled the
distances are divided by the image-wide maximum, so they land in [0, 1]
regardless of the reference; pixels strictly below the threshold become
centreline pixels.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .colour import DEFAULT_REFERENCE, ReferenceColour, hsi_distance_image, hsi_image
from .raster import BinaryRaster, RgbRaster


class DegenerateNormalisationWarning(UserWarning):
    """All pixels are at distance zero from the reference; nothing to normalise."""


@dataclass(frozen=True)
class ExtractionConfig:
    """Reference colour, threshold and normalisation switch for extraction.

    The default threshold 0.3 (on normalised distances) passes
    near-reference annotation strokes while rejecting photographic
    background. `preset_threshold_3` reproduces the legacy setting
    threshold = 3, which with normalised distances marks every pixel.
    """

    ref: ReferenceColour = DEFAULT_REFERENCE
    threshold: float = 0.3
    normalise: bool = True

    def __post_init__(self) -> None:
        if not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")


def preset_threshold_3() -> ExtractionConfig:
    """Legacy preset: normalised distances with threshold 3 (every pixel passes)."""
    return ExtractionConfig(ref=DEFAULT_REFERENCE, threshold=3.0, normalise=True)


def extract_centreline(img: RgbRaster, cfg: ExtractionConfig) -> BinaryRaster:
    """Threshold colour distances to the reference into a centreline mask.

    Returns a mask with the same dimensions as `img`. If normalisation is
    requested but the maximum distance is zero (every pixel equals the
    reference exactly), all distances are defined as zero and a warning
    is emitted; the mask is then all-true for any positive threshold.
    """
    hsi = hsi_image(img.pixels)
    dist = hsi_distance_image(hsi, cfg.ref)

    if cfg.normalise:
        d_max = float(dist.max())
        if d_max == 0.0:
            warnings.warn(
                "all pixels match the reference colour exactly; "
                "normalised distances defined as 0",
                DegenerateNormalisationWarning,
                stacklevel=2,
            )
            dist = np.zeros_like(dist)
        else:
            dist = dist / d_max

    return BinaryRaster(dist < cfg.threshold)
