"""Experiment specification and validation."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

KNOWN_METRICS = ("bertscore", "bleurt", "comet", "meteor")

#: Multi-version runs train 15 epochs; single-version runs see roughly a
#: third of the data per epoch and get 45.
EPOCHS_MULTI_VERSION = 15
EPOCHS_SINGLE_VERSION = 45


def default_epochs(n_versions: int) -> int:
    return EPOCHS_SINGLE_VERSION if n_versions == 1 else EPOCHS_MULTI_VERSION


@dataclass(frozen=True)
class ExperimentSpec:
    """One fine-tune-and-score run."""

    model: str
    train_corpora: tuple[Path, ...]
    test_corpora: tuple[Path, ...]
    output_table: Path
    epochs: int = EPOCHS_MULTI_VERSION
    metrics: tuple[str, ...] = ("meteor",)
    seed: int = 0
    learning_rate: float = 5e-3
    batch_size: int = 16

    def __post_init__(self):
        object.__setattr__(self, "train_corpora", tuple(Path(p) for p in self.train_corpora))
        object.__setattr__(self, "test_corpora", tuple(Path(p) for p in self.test_corpora))
        object.__setattr__(self, "output_table", Path(self.output_table))
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not self.train_corpora:
            raise ValueError("at least one training corpus is required")
        if not self.test_corpora:
            raise ValueError("at least one test corpus is required")
        for path in (*self.train_corpora, *self.test_corpora):
            if not Path(path).is_file():
                raise ValueError(f"corpus file not found: {path}")
        unknown = [m for m in self.metrics if m not in KNOWN_METRICS]
        if unknown:
            raise ValueError(
                f"unknown metrics {unknown}; choose from {', '.join(KNOWN_METRICS)}"
            )
        if not self.metrics:
            raise ValueError("metric set must be non-empty")
