"""Standardization of the conversational block and per-configuration assembly."""

from __future__ import annotations

import enum

import numpy as np
import scipy.sparse as sp

from .conversational import N_COLUMNS


class FeatureSet(str, enum.Enum):
    TEXTUAL = "T"
    CONVERSATIONAL = "C"
    BOTH = "B"

    @property
    def uses_text(self) -> bool:
        return self is not FeatureSet.CONVERSATIONAL

    @property
    def uses_conversation(self) -> bool:
        return self is not FeatureSet.TEXTUAL


class StandardScaler:
    """Column z-scores from training statistics; constant columns map to 0."""

    def __init__(self, mean=None, std=None):
        self.mean = None if mean is None else np.asarray(mean, dtype=np.float64)
        self.std = None if std is None else np.asarray(std, dtype=np.float64)

    @property
    def fitted(self) -> bool:
        return self.mean is not None

    def fit(self, X) -> "StandardScaler":
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or len(X) == 0:
            raise ValueError("scaler needs a non-empty 2-D training matrix")
        self.mean = X.mean(axis=0)
        self.std = X.std(axis=0)
        return self

    def transform(self, X) -> np.ndarray:
        if not self.fitted:
            raise ValueError("scaler is not fitted")
        X = np.asarray(X, dtype=np.float64)
        safe = np.where(self.std > 0, self.std, 1.0)
        return np.where(self.std > 0, (X - self.mean) / safe, 0.0)

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> "StandardScaler":
        return cls(obj["mean"], obj["std"])


def assemble_features(config, textual=None, conv=None, scaler: StandardScaler | None = None) -> sp.csr_matrix:
    """Build the model input matrix for a feature-set configuration.

    ``textual`` is an n x V sparse TF-IDF block, ``conv`` the raw n x 17
    conversational encoding. Configuration B places the textual block first.
    """
    config = FeatureSet(config)
    blocks = []
    if config.uses_text:
        if textual is None:
            raise ValueError(f"configuration {config.value} requires textual features")
        blocks.append(sp.csr_matrix(textual))
    if config.uses_conversation:
        if conv is None:
            raise ValueError(f"configuration {config.value} requires conversational features")
        if scaler is None or not scaler.fitted:
            raise ValueError("conversational features need a scaler fitted on training data")
        conv = np.atleast_2d(np.asarray(conv, dtype=np.float64))
        if conv.shape[1] != N_COLUMNS:
            raise ValueError(f"expected {N_COLUMNS} conversational columns, got {conv.shape[1]}")
        blocks.append(sp.csr_matrix(scaler.transform(conv)))
    if len(blocks) == 1:
        return blocks[0].tocsr()
    if blocks[0].shape[0] != blocks[1].shape[0]:
        raise ValueError("textual and conversational blocks differ in row count")
    return sp.hstack(blocks, format="csr")
