"""RGB to HSI conversion and colour distances for annotation extraction.

HSI coordinates are normalised to [0, 1] (hue 1 corresponds to 360
degrees). Conversions use the standard arccos form:

    I = (R + G + B) / (3 * 255)
    S = 1 - min(R, G, B) / ((R + G + B) / 3)        (0 for black)
    H = arccos(num / den) / 2pi,  mirrored to 1 - H/2pi when B > G

with num = ((R-G) + (R-B)) / 2 and den = sqrt((R-G)^2 + (R-B)(G-B)).
Achromatic pixels (R = G = B, where the hue is undefined) get H = 0.

Distances between HSI pixels are plain Euclidean in the three
coordinates. Hue wrap-around is deliberately not applied; callers that
care should pick a reference colour away from the hue seam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class HsiPixel:
    """One pixel in normalised HSI coordinates."""

    h: float
    s: float
    i: float

    def __post_init__(self) -> None:
        _check_unit("h", self.h)
        _check_unit("s", self.s)
        _check_unit("i", self.i)


@dataclass(frozen=True)
class ReferenceColour:
    """Annotation reference colour in normalised HSI coordinates.

    The default (0.6, 1.0, 1.0) is kept for compatibility with existing
    annotation workflows. Note that saturation 1 together with intensity
    1 is unreachable from 8-bit RGB, so distances to this reference are
    never zero; with normalised extraction only relative distances
    matter. The reference is fully configurable.
    """

    h: float = 0.6
    s: float = 1.0
    i: float = 1.0

    def __post_init__(self) -> None:
        _check_unit("h", self.h)
        _check_unit("s", self.s)
        _check_unit("i", self.i)


DEFAULT_REFERENCE = ReferenceColour()


def hsi_image(pixels: np.ndarray) -> np.ndarray:
    """Convert an (h, w, 3) uint8 RGB array to an (h, w, 3) float HSI array."""
    rgb = np.asarray(pixels, dtype=np.float64)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) RGB array, got shape {rgb.shape}")
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]

    total = r + g + b
    i = total / 765.0

    s = np.zeros_like(total)
    chromatic = total > 0
    mins = np.minimum(np.minimum(r, g), b)
    s[chromatic] = 1.0 - 3.0 * mins[chromatic] / total[chromatic]
    np.clip(s, 0.0, 1.0, out=s)

    num = 0.5 * ((r - g) + (r - b))
    den_sq = (r - g) ** 2 + (r - b) * (g - b)
    h = np.zeros_like(total)
    defined = den_sq > 0  # den == 0 iff R = G = B, where hue is pinned to 0
    theta = np.arccos(np.clip(num[defined] / np.sqrt(den_sq[defined]), -1.0, 1.0))
    hue = theta / (2.0 * math.pi)
    hue = np.where(b[defined] > g[defined], 1.0 - hue, hue)
    h[defined] = hue

    return np.stack([h, s, i], axis=-1)


def rgb_to_hsi(pixel: tuple[int, int, int]) -> HsiPixel:
    """Convert one (R, G, B) byte triple to an HsiPixel."""
    for c in pixel:
        if not 0 <= c <= 255:
            raise ValueError(f"RGB bytes must lie in [0, 255], got {pixel}")
    arr = np.array(pixel, dtype=np.uint8).reshape(1, 1, 3)
    h, s, i = hsi_image(arr)[0, 0]
    return HsiPixel(float(h), float(s), float(i))


def hsi_distance(p: HsiPixel, ref: ReferenceColour) -> float:
    """Euclidean distance between an HSI pixel and the reference colour."""
    return math.sqrt((p.h - ref.h) ** 2 + (p.s - ref.s) ** 2 + (p.i - ref.i) ** 2)


def hsi_distance_image(hsi: np.ndarray, ref: ReferenceColour) -> np.ndarray:
    """Per-pixel Euclidean distance of an (h, w, 3) HSI array to `ref`."""
    diff = hsi - np.array([ref.h, ref.s, ref.i])
    return np.sqrt(np.sum(diff * diff, axis=-1))
