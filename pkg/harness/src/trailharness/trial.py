"""Trial description shared by the CLI and the runner."""

from __future__ import annotations

from dataclasses import dataclass

from .registry import resolve_architecture, resolve_encoder

LOSSES = ("bce", "dice")


@dataclass(frozen=True)
class TrialSpec:
    """One architecture x encoder training run on one fold.

    Names are normalised to their canonical registry form on
    construction, so downstream paths and logs are consistent however
    the caller spelled them. Optimisation settings are free parameters
    with small CPU-friendly defaults.
    """

    architecture: str
    encoder: str
    fold: int
    epochs: int = 1
    learning_rate: float = 1e-3
    batch_size: int = 2
    loss: str = "bce"

    def __post_init__(self) -> None:
        arch, _ = resolve_architecture(self.architecture)
        enc, _ = resolve_encoder(self.encoder)
        object.__setattr__(self, "architecture", arch)
        object.__setattr__(self, "encoder", enc)
        if self.fold < 0:
            raise ValueError(f"fold index must be nonnegative, got {self.fold}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be at least 1, got {self.epochs}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ValueError(f"batch size must be at least 1, got {self.batch_size}")
        if self.loss not in LOSSES:
            raise ValueError(f"loss must be one of {LOSSES}, got {self.loss!r}")

    @property
    def model_dir_name(self) -> str:
        return f"{self.architecture}__{self.encoder}"

    def as_dict(self) -> dict:
        return {
            "architecture": self.architecture,
            "encoder": self.encoder,
            "fold": self.fold,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "loss": self.loss,
        }
