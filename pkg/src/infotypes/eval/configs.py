"""Experiment configurations and the hyperparameter grids searched for each."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from ..errors import ValidationError
from ..features.assemble import FeatureSet

C_VALUES = (0.01, 0.1, 1.0, 10.0)
MIN_SAMPLES_SPLIT_VALUES = (2, 5, 10)
N_ESTIMATORS_VALUES = (10, 50, 100)
NGRAM_RANGES = ((1, 1), (1, 2))


class ModelKind(str, enum.Enum):
    LOGREG = "L"
    FOREST = "R"


class Balancing(str, enum.Enum):
    CLASS_WEIGHT = "C"
    SMOTE = "S"


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelKind
    feature_set: FeatureSet
    balancing: Balancing

    @property
    def id(self) -> str:
        return self.model.value + self.feature_set.value + self.balancing.value

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        code = text.strip().upper()
        if len(code) != 3:
            raise ValidationError(f"unknown configuration {text!r}")
        try:
            return cls(ModelKind(code[0]), FeatureSet(code[1]), Balancing(code[2]))
        except ValueError:
            raise ValidationError(f"unknown configuration {text!r}") from None

    def __str__(self) -> str:
        return self.id


ALL_CONFIGS = tuple(
    ExperimentConfig(m, f, b)
    for m, f, b in itertools.product(ModelKind, FeatureSet, Balancing)
)


@dataclass(frozen=True)
class Hyperparameters:
    ngram_range: tuple[int, int] | None = None
    C: float | None = None
    min_samples_split: int | None = None
    n_estimators: int | None = None

    def simplicity(self) -> tuple:
        """Sort key of the tie rule: smaller C, fewer trees, smaller split size, narrower n-grams."""
        return (
            self.C if self.C is not None else 0.0,
            self.n_estimators or 0,
            self.min_samples_split or 0,
            self.ngram_range[1] if self.ngram_range else 0,
        )

    def to_dict(self) -> dict:
        out = {}
        if self.ngram_range is not None:
            out["ngram_range"] = list(self.ngram_range)
        if self.C is not None:
            out["C"] = self.C
        if self.min_samples_split is not None:
            out["min_samples_split"] = self.min_samples_split
        if self.n_estimators is not None:
            out["n_estimators"] = self.n_estimators
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "Hyperparameters":
        ngram = obj.get("ngram_range")
        return cls(
            tuple(ngram) if ngram is not None else None,
            obj.get("C"),
            obj.get("min_samples_split"),
            obj.get("n_estimators"),
        )


def hyperparameter_grid(config: ExperimentConfig) -> list[Hyperparameters]:
    """Grid points for a configuration, simplest first."""
    ngrams = NGRAM_RANGES if config.feature_set.uses_text else (None,)
    if config.model is ModelKind.LOGREG:
        points = [Hyperparameters(ngram_range=g, C=c) for g in ngrams for c in C_VALUES]
    else:
        points = [
            Hyperparameters(ngram_range=g, min_samples_split=m, n_estimators=t)
            for g in ngrams
            for m in MIN_SAMPLES_SPLIT_VALUES
            for t in N_ESTIMATORS_VALUES
        ]
    return sorted(points, key=Hyperparameters.simplicity)
