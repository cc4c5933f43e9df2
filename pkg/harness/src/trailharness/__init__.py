"""Training harness for the trail segmentation benchmark.

Runs one architecture x encoder pair on one manifest fold and writes
its predictions where the benchmark evaluator expects them.
"""

from .registry import ARCHITECTURES, ENCODERS, resolve_architecture, resolve_encoder
from .runner import HarnessDataError, TrialFailed, train_and_predict
from .trial import TrialSpec

__version__ = "0.1.0"

__all__ = [
    "ARCHITECTURES",
    "ENCODERS",
    "HarnessDataError",
    "TrialFailed",
    "TrialSpec",
    "resolve_architecture",
    "resolve_encoder",
    "train_and_predict",
    "__version__",
]
