"""Sentence classification of a single thread with a trained model bundle."""

from __future__ import annotations

import numpy as np

from ..corpus.types import IssueThread
from ..errors import ConfigMismatchError
from ..features.assemble import FeatureSet, assemble_features
from ..features.conversational import thread_features
from ..models.forest import RandomForestModel
from ..models.persistence import ModelBundle
from ..preprocess.pipeline import segment_thread


def bundle_feature_set(bundle: ModelBundle) -> FeatureSet:
    if bundle.config:
        return FeatureSet(bundle.config[1])
    if bundle.vectorizer is not None and bundle.scaler is not None:
        return FeatureSet.BOTH
    return FeatureSet.TEXTUAL if bundle.vectorizer is not None else FeatureSet.CONVERSATIONAL


def classify_thread(bundle: ModelBundle, thread: IssueThread) -> list[tuple[str, object, dict]]:
    """``(sentence id, label, scores)`` for every sentence, in thread order.

    Unsegmented threads are segmented first. Scores are per-label
    probabilities for logistic regression and vote fractions for forests.
    """
    fs = bundle_feature_set(bundle)
    if fs.uses_conversation and thread.synthetic_timestamps:
        raise ConfigMismatchError(
            f"configuration {bundle.config or fs.value} uses conversational features but thread "
            f"{thread.key} has no real timestamps"
        )
    if fs.uses_text and bundle.vectorizer is None:
        raise ConfigMismatchError("bundle lacks the vectorizer its configuration needs")
    if fs.uses_conversation and bundle.scaler is None:
        raise ConfigMismatchError("bundle lacks the scaler its configuration needs")
    thread = segment_thread(thread)
    sentences = [s for _, s in thread.sentences()]
    if not sentences:
        return []
    textual = bundle.vectorizer.transform([s.tokens for s in sentences]) if fs.uses_text else None
    conv = None
    if fs.uses_conversation:
        feats = thread_features(thread)
        conv = np.vstack([feats[s.id].encode() for s in sentences])
    X = assemble_features(fs, textual, conv, bundle.scaler)
    model = bundle.model
    if X.shape[1] != model.width:
        raise ConfigMismatchError(f"features have width {X.shape[1]} but the model expects {model.width}")
    proba = model.predict_proba(X)
    out = []
    for s, row in zip(sentences, proba):
        best = int(np.argmax(row))
        scores = {label: float(p) for label, p in zip(model.labels, row)}
        out.append((s.id, model.labels[best], scores))
    return out


def model_kind(bundle: ModelBundle) -> str:
    return "forest" if isinstance(bundle.model, RandomForestModel) else "logreg"
