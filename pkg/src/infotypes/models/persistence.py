"""Versioned JSON model bundles (``*.itm.json``)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..corpus.types import InfoType
from ..errors import ModelFormatError
from ..features.assemble import StandardScaler
from ..features.tfidf import TfidfVectorizer
from .forest import DecisionTree, RandomForestModel
from .logreg import LogisticRegressionModel

FORMAT_VERSION = 1
EXTENSION = ".itm.json"


@dataclass
class ModelBundle:
    model: LogisticRegressionModel | RandomForestModel
    vectorizer: TfidfVectorizer | None = None
    scaler: StandardScaler | None = None
    config: str | None = None
    hyperparameters: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return "logreg" if isinstance(self.model, LogisticRegressionModel) else "forest"


def _encode_labels(labels):
    if all(isinstance(v, InfoType) for v in labels):
        return "InfoType", [v.name for v in labels]
    if all(isinstance(v, str) for v in labels):
        return "str", list(labels)
    if all(isinstance(v, (int, np.integer)) for v in labels):
        return "int", [int(v) for v in labels]
    raise ModelFormatError("labels must be all InfoType, all str or all int")


def _decode_labels(kind, values):
    if kind == "InfoType":
        return [InfoType[v] for v in values]
    if kind == "str":
        return [str(v) for v in values]
    if kind == "int":
        return [int(v) for v in values]
    raise ModelFormatError(f"unknown label kind {kind!r}")


def _model_params(model) -> dict:
    if isinstance(model, LogisticRegressionModel):
        return {
            "weights": model.weights.T.tolist(),
            "bias": model.bias.tolist(),
            "C": model.C,
            "iterations": model.iterations,
            "converged": model.converged,
        }
    return {
        "width": model.width,
        "n_estimators": model.n_estimators,
        "min_samples_split": model.min_samples_split,
        "seed": model.seed,
        "max_features": model.max_features,
        "bootstrap": model.bootstrap,
        "trees": [
            {
                "feature": t.feature.tolist(),
                "threshold": t.threshold.tolist(),
                "left": t.left.tolist(),
                "right": t.right.tolist(),
                "value": t.value.tolist(),
            }
            for t in model.trees
        ],
    }


def bundle_to_dict(bundle: ModelBundle) -> dict:
    label_kind, labels = _encode_labels(bundle.model.labels)
    return {
        "format_version": FORMAT_VERSION,
        "kind": bundle.kind,
        "config": bundle.config,
        "hyperparameters": bundle.hyperparameters,
        "label_kind": label_kind,
        "labels": labels,
        "params": _model_params(bundle.model),
        "vectorizer": bundle.vectorizer.to_dict() if bundle.vectorizer is not None else None,
        "scaler": bundle.scaler.to_dict() if bundle.scaler is not None else None,
    }


def bundle_from_dict(obj: dict) -> ModelBundle:
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format_version {version!r} (expected {FORMAT_VERSION})")
    try:
        labels = _decode_labels(obj["label_kind"], obj["labels"])
        p = obj["params"]
        if obj["kind"] == "logreg":
            model = LogisticRegressionModel(
                labels=labels,
                weights=np.array(p["weights"], dtype=np.float64).reshape(len(labels), -1).T.copy(),
                bias=np.array(p["bias"], dtype=np.float64),
                C=p["C"],
                iterations=p["iterations"],
                converged=p["converged"],
            )
        elif obj["kind"] == "forest":
            trees = [
                DecisionTree(
                    np.array(t["feature"], dtype=np.int64),
                    np.array(t["threshold"], dtype=np.float64),
                    np.array(t["left"], dtype=np.int64),
                    np.array(t["right"], dtype=np.int64),
                    np.array(t["value"], dtype=np.float64).reshape(len(t["feature"]), len(labels)),
                )
                for t in p["trees"]
            ]
            model = RandomForestModel(labels, trees, p["width"], p["n_estimators"], p["min_samples_split"],
                                      p["seed"], p["max_features"], p["bootstrap"])
        else:
            raise ModelFormatError(f"unknown model kind {obj['kind']!r}")
        vectorizer = TfidfVectorizer.from_dict(obj["vectorizer"]) if obj.get("vectorizer") else None
        scaler = StandardScaler.from_dict(obj["scaler"]) if obj.get("scaler") else None
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model bundle: {exc!r}") from None
    return ModelBundle(model, vectorizer, scaler, obj.get("config"), obj.get("hyperparameters") or {})


def save_model(model, vectorizer, scaler, path, config: str | None = None, hyperparameters=None) -> None:
    bundle = model if isinstance(model, ModelBundle) else ModelBundle(
        model, vectorizer, scaler, config, dict(hyperparameters or {})
    )
    text = json.dumps(bundle_to_dict(bundle), sort_keys=True, separators=(",", ":"))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_model(path) -> ModelBundle:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ModelFormatError(f"{path}: not UTF-8 (byte {exc.start})") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ModelFormatError(f"{path}: invalid JSON at byte {offset}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{path}: model bundle must be a JSON object")
    return bundle_from_dict(obj)
