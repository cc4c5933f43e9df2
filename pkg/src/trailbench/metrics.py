"""Pixel confusion counting and IoU / Precision / Recall / F1.

Metrics with a zero denominator are undefined and reported as None (no
NaN is ever propagated). Aggregation either averages the defined
per-image metrics or pools the pixel counts first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .raster import BinaryRaster, ProbRaster

AggregationMode = Literal["mean_over_images", "pooled_pixels"]

METRIC_NAMES = ("iou", "precision", "recall", "f1")


@dataclass(frozen=True)
class ConfusionCounts:
    """Pixel counts of true/false positives/negatives for one compared pair."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "tn", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp,
            self.fp + other.fp,
            self.tn + other.tn,
            self.fn + other.fn,
        )


@dataclass(frozen=True)
class MetricSet:
    """IoU, precision, recall and F1; None marks an undefined value."""

    iou: float | None
    precision: float | None
    recall: float | None
    f1: float | None

    def as_dict(self) -> dict[str, float | None]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def binarise(p: ProbRaster, tau: float = 0.5) -> BinaryRaster:
    """Threshold a probability raster: true where value >= tau."""
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie strictly inside (0, 1), got {tau}")
    return BinaryRaster(p.values >= tau)


def confusion(pred: BinaryRaster, gt: BinaryRaster) -> ConfusionCounts:
    """Exact pixel confusion counts; predictions and groundtruth must match in size."""
    if pred.bits.shape != gt.bits.shape:
        raise ValueError(
            f"dimension mismatch: prediction {pred.bits.shape} vs groundtruth {gt.bits.shape}"
        )
    p = pred.bits
    g = gt.bits
    tp = int(np.count_nonzero(p & g))
    fp = int(np.count_nonzero(p & ~g))
    fn = int(np.count_nonzero(~p & g))
    tn = p.size - tp - fp - fn
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def _ratio(num: int, den: int) -> float | None:
    return num / den if den > 0 else None


def metric_set(c: ConfusionCounts) -> MetricSet:
    """Compute the four metrics from confusion counts.

    iou = tp / (tp + fp + fn); precision = tp / (tp + fp);
    recall = tp / (tp + fn); f1 = 2 * precision * recall / (precision + recall).
    """
    iou = _ratio(c.tp, c.tp + c.fp + c.fn)
    precision = _ratio(c.tp, c.tp + c.fp)
    recall = _ratio(c.tp, c.tp + c.fn)
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return MetricSet(iou=iou, precision=precision, recall=recall, f1=f1)


def _as_metric_set(item: MetricSet | ConfusionCounts) -> MetricSet:
    if isinstance(item, ConfusionCounts):
        return metric_set(item)
    return item


def count_defined(items: Iterable[MetricSet | ConfusionCounts]) -> dict[str, int]:
    """How many items have each metric defined (for skip reporting)."""
    counts = dict.fromkeys(METRIC_NAMES, 0)
    for item in items:
        ms = _as_metric_set(item)
        for name in METRIC_NAMES:
            if getattr(ms, name) is not None:
                counts[name] += 1
    return counts


def aggregate(
    items: Sequence[MetricSet | ConfusionCounts],
    mode: AggregationMode = "mean_over_images",
) -> MetricSet:
    """Aggregate per-image results.

    mean_over_images averages each metric over the items where it is
    defined (use `count_defined` to report how many were skipped);
    pooled_pixels sums the confusion counts and computes the metrics
    once, and therefore requires ConfusionCounts items.
    """
    if len(items) == 0:
        raise ValueError("cannot aggregate an empty list")
    if mode == "mean_over_images":
        values: dict[str, list[float]] = {name: [] for name in METRIC_NAMES}
        for item in items:
            ms = _as_metric_set(item)
            for name in METRIC_NAMES:
                v = getattr(ms, name)
                if v is not None:
                    values[name].append(v)
        return MetricSet(
            **{
                name: (float(np.mean(vals)) if vals else None)
                for name, vals in values.items()
            }
        )
    if mode == "pooled_pixels":
        total = ConfusionCounts(0, 0, 0, 0)
        for item in items:
            if not isinstance(item, ConfusionCounts):
                raise TypeError("pooled_pixels aggregation needs ConfusionCounts items")
            total = total + item
        return metric_set(total)
    raise ValueError(f"unknown aggregation mode {mode!r}")
