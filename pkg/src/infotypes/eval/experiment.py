"""Nested cross-validation experiments."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from ..balance import compute_class_weights, sample_weights, smote_resample
from ..corpus.dataset import Dataset
from ..features.assemble import StandardScaler, assemble_features
from ..features.conversational import BINARY_COLUMNS, N_COLUMNS, thread_features
from ..features.tfidf import fit_vectorizer
from ..models.forest import train_forest
from ..models.logreg import train_logreg
from ..models.persistence import ModelBundle
from .configs import ALL_CONFIGS, Balancing, ExperimentConfig, Hyperparameters, ModelKind, hyperparameter_grid
from .metrics import MetricsReport, format_table, score_predictions
from .splits import Fold, kfold_splits, leave_one_issue_out

logger = logging.getLogger(__name__)

INNER_FOLDS = 5
OUTER_FOLDS = 5
SMOTE_NEIGHBORS = 5

# spawn-key tags keeping the seed streams of different purposes apart
_OUTER, _INNER, _FIT = 0, 1, 2


def derive_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=tuple(key)).generate_state(1)[0])


class FeatureCache:
    """Per-sentence inputs computed once per dataset: tokens, raw conversational rows, labels."""

    def __init__(self, dataset: Dataset):
        self.labels = dataset.labels
        self.tokens = [item.sentence.tokens for item in dataset.items]
        self.threads = np.array([item.thread_index for item in dataset.items], dtype=np.int64)
        per_thread = {}
        rows = []
        for item in dataset.items:
            if item.thread_index not in per_thread:
                thread = dataset.threads[item.thread_index]
                if thread.synthetic_timestamps:
                    logger.warning("thread %s has synthetic timestamps; temporal features are degraded", thread.key)
                per_thread[item.thread_index] = thread_features(thread)
            rows.append(per_thread[item.thread_index][item.sentence.id].encode())
        self.conv = np.vstack(rows) if rows else np.zeros((0, N_COLUMNS))

    def __len__(self) -> int:
        return len(self.labels)


@dataclass
class FittedFeatures:
    vectorizer: object
    scaler: StandardScaler | None
    binary_columns: tuple


def fit_features(cache: FeatureCache, config: ExperimentConfig, ngram_range, train_idx) -> FittedFeatures:
    """Fit the vectorizer and scaler on training rows only."""
    fs = config.feature_set
    vec = fit_vectorizer([cache.tokens[i] for i in train_idx], ngram_range or (1, 1)) if fs.uses_text else None
    scaler = StandardScaler().fit(cache.conv[train_idx]) if fs.uses_conversation else None
    offset = vec.width if vec is not None else 0
    binary = tuple(offset + c for c in BINARY_COLUMNS) if fs.uses_conversation else ()
    return FittedFeatures(vec, scaler, binary)


def feature_matrix(cache: FeatureCache, config: ExperimentConfig, fitted: FittedFeatures, idx):
    textual = fitted.vectorizer.transform([cache.tokens[i] for i in idx]) if fitted.vectorizer else None
    conv = cache.conv[idx] if fitted.scaler is not None else None
    return assemble_features(config.feature_set, textual, conv, fitted.scaler)


def balance_training(config: ExperimentConfig, X, y, seed: int, binary_columns=()):
    """Return ``(X, y, sample_weights)`` after the configuration's balancing strategy."""
    if config.balancing is Balancing.SMOTE:
        X, y = smote_resample(X, y, k=SMOTE_NEIGHBORS, seed=seed, binary_columns=binary_columns,
                              skip_singletons=True)
        return X, y, None
    return X, y, sample_weights(y, compute_class_weights(y))


def _fit_and_predict(config, points, X, y, w, X_test, seed):
    """Predictions on ``X_test`` for every grid point; forests share trees across tree counts."""
    out = {}
    if config.model is ModelKind.LOGREG:
        for hp in points:
            out[hp] = train_logreg(X, y, hp.C, sample_weights=w, seed=seed).predict(X_test)
        return out
    by_split = defaultdict(list)
    for hp in points:
        by_split[hp.min_samples_split].append(hp)
    for mss, group in by_split.items():
        forest = train_forest(X, y, max(hp.n_estimators for hp in group), mss, sample_weights=w, seed=seed)
        for hp in group:
            out[hp] = forest.predict(X_test, n_trees=hp.n_estimators)
    return out


def _evaluate_points(cache, config, points, train_idx, test_idx, seed):
    """Train on ``train_idx`` for every grid point sharing one n-gram range and predict ``test_idx``."""
    y_train = [cache.labels[i] for i in train_idx]
    if len(set(y_train)) < 2:
        raise ValueError("training split holds fewer than two labels")
    fitted = fit_features(cache, config, points[0].ngram_range, train_idx)
    X = feature_matrix(cache, config, fitted, train_idx)
    X_test = feature_matrix(cache, config, fitted, test_idx)
    X, y, w = balance_training(config, X, y_train, seed, fitted.binary_columns)
    return _fit_and_predict(config, points, X, y, w, X_test, seed)


def _inner_job(cache, config, points, train_idx, test_idx, seed):
    gold = [cache.labels[i] for i in test_idx]
    missing = set(gold) - {cache.labels[i] for i in train_idx}
    if missing:
        logger.warning("inner training split lacks labels %s; they score 0", sorted(missing))
    preds = _evaluate_points(cache, config, points, train_idx, test_idx, seed)
    return {hp: score_predictions(gold, pred).f1 for hp, pred in preds.items()}


def _group_by_ngram(points):
    groups = defaultdict(list)
    for hp in points:
        groups[hp.ngram_range].append(hp)
    return [groups[g] for g in sorted(groups, key=lambda g: g or (0, 0))]


def select_hyperparameters(mean_scores: dict) -> Hyperparameters:
    """Highest mean score; ties go to the simplest point."""
    best = max(mean_scores.values())
    return min((hp for hp, s in mean_scores.items() if s == best), key=Hyperparameters.simplicity)


def _inner_tasks(cache, config, train_idx, seed, key):
    labels = [cache.labels[i] for i in train_idx]
    k = min(INNER_FOLDS, len(train_idx))
    inner = kfold_splits(labels, k, derive_seed(seed, _INNER, *key))
    tasks = []
    for fold in inner:
        fit_seed = derive_seed(seed, _FIT, *key, fold.id + 1)
        for points in _group_by_ngram(hyperparameter_grid(config)):
            tasks.append((points, train_idx[fold.train], train_idx[fold.test], fit_seed))
    return tasks, len(inner)


def _collect(results, n_inner):
    totals = defaultdict(float)
    for scores in results:
        for hp, f1 in scores.items():
            totals[hp] += f1
    return {hp: total / n_inner for hp, total in totals.items()}


def _parallel(n_jobs):
    return Parallel(n_jobs=n_jobs, backend="loky" if n_jobs != 1 else "sequential")


def grid_search(dataset_or_cache, config, seed: int = 0, indices=None, n_jobs: int = 1):
    """Select hyperparameters by inner stratified 5-fold over ``indices`` (default: all rows).

    Returns ``(best, mean_scores)``.
    """
    config = ExperimentConfig.parse(config) if isinstance(config, str) else config
    cache = dataset_or_cache if isinstance(dataset_or_cache, FeatureCache) else FeatureCache(dataset_or_cache)
    idx = np.arange(len(cache)) if indices is None else np.asarray(indices, dtype=np.int64)
    tasks, n_inner = _inner_tasks(cache, config, idx, seed, (_config_key(config), 0))
    results = _parallel(n_jobs)(delayed(_inner_job)(cache, config, *t) for t in tasks)
    means = _collect(results, n_inner)
    return select_hyperparameters(means), means


def _config_key(config: ExperimentConfig) -> int:
    return ALL_CONFIGS.index(config)


@dataclass
class FoldResult:
    fold_id: int
    hyperparameters: Hyperparameters
    report: MetricsReport
    test_indices: list
    predictions: list


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    scenario: int
    seed: int
    folds: list
    f1: float  # fold-size-weighted mean of per-fold weighted F1
    uniform_f1: float
    pooled: MetricsReport
    error: str | None = None
    grid_scores: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config.id,
            "scenario": self.scenario,
            "seed": self.seed,
            "weighted_f1": self.f1,
            "uniform_mean_f1": self.uniform_f1,
            "pooled": self.pooled.to_dict(),
            "folds": [
                {
                    "fold": f.fold_id,
                    "hyperparameters": f.hyperparameters.to_dict(),
                    "size": f.report.support,
                    "report": f.report.to_dict(),
                }
                for f in self.folds
            ],
        }

    def format_table(self) -> str:
        title = f"{self.config.id}, scenario {self.scenario}"
        return "\n".join([
            format_table(self.pooled, title),
            f"Fold-size-weighted F1: {self.f1:.4f}",
            f"Uniform mean F1:       {self.uniform_f1:.4f}",
        ])


def outer_folds(dataset: Dataset, scenario: int, seed: int) -> list[Fold]:
    if scenario == 1:
        return kfold_splits(dataset.labels, OUTER_FOLDS, derive_seed(seed, _OUTER))
    if scenario == 2:
        return leave_one_issue_out(dataset)
    raise ValueError(f"unknown scenario {scenario!r} (expected 1 or 2)")


def _outer_job(cache, config, hp, train_idx, test_idx, seed):
    return _evaluate_points(cache, config, [hp], train_idx, test_idx, seed)[hp]


def _run_config(cache, folds, config, scenario, seed, n_jobs) -> ExperimentResult:
    ck = _config_key(config)
    tasks, owners, n_inner = [], [], []
    for fold in folds:
        t, n = _inner_tasks(cache, config, fold.train, seed, (ck, fold.id + 1))
        tasks += t
        owners += [fold.id] * len(t)
        n_inner.append(n)
    results = _parallel(n_jobs)(delayed(_inner_job)(cache, config, *t) for t in tasks)
    chosen, grid_scores = [], {}
    for fold, n in zip(folds, n_inner):
        means = _collect([r for r, o in zip(results, owners) if o == fold.id], n)
        chosen.append(select_hyperparameters(means))
        grid_scores[fold.id] = means
    preds = _parallel(n_jobs)(
        delayed(_outer_job)(cache, config, hp, fold.train, fold.test, derive_seed(seed, _FIT, ck, fold.id + 1, 0))
        for fold, hp in zip(folds, chosen)
    )
    fold_results = []
    for fold, hp, pred in zip(folds, chosen, preds):
        gold = [cache.labels[i] for i in fold.test]
        report = score_predictions(gold, pred, fold_id=fold.id, config_id=config.id)
        fold_results.append(FoldResult(fold.id, hp, report, fold.test.tolist(), list(pred)))
    sizes = np.array([len(f.test) for f in folds], dtype=np.float64)
    f1s = np.array([r.report.f1 for r in fold_results])
    pooled_gold = [cache.labels[i] for f in folds for i in f.test]
    pooled_pred = [p for r in fold_results for p in r.predictions]
    return ExperimentResult(
        config, scenario, seed, fold_results,
        float(sizes @ f1s / sizes.sum()), float(f1s.mean()),
        score_predictions(pooled_gold, pooled_pred, config_id=config.id),
        grid_scores=grid_scores,
    )


def run_experiment(dataset: Dataset, scenario: int, config=None, seed: int = 42, n_jobs: int = 1):
    """Run one configuration (or all twelve when ``config`` is None) under a scenario.

    Scenario 1 is stratified 5-fold, scenario 2 leave-one-issue-out. Every
    outer fold tunes hyperparameters by inner stratified 5-fold on its
    training part, then refits and scores on its test part. Results do not
    depend on ``n_jobs``. With ``config=None`` a dict of results keyed by
    configuration id is returned; a configuration that fails is reported by
    an error string in place of its result.
    """
    cache = FeatureCache(dataset)
    folds = outer_folds(dataset, scenario, seed)
    if config is not None:
        config = ExperimentConfig.parse(config) if isinstance(config, str) else config
        return _run_config(cache, folds, config, scenario, seed, n_jobs)
    out = {}
    for cfg in ALL_CONFIGS:
        try:
            out[cfg.id] = _run_config(cache, folds, cfg, scenario, seed, n_jobs)
        except Exception as exc:  # one broken configuration must not sink the sweep
            logger.error("configuration %s failed: %s", cfg.id, exc)
            out[cfg.id] = f"{type(exc).__name__}: {exc}"
    return out


def train_final_model(dataset: Dataset, config, seed: int = 42, hyperparameters: Hyperparameters | None = None,
                      n_jobs: int = 1) -> ModelBundle:
    """Tune on the whole dataset (unless ``hyperparameters`` is given) and fit one deployable model."""
    config = ExperimentConfig.parse(config) if isinstance(config, str) else config
    cache = FeatureCache(dataset)
    if hyperparameters is None:
        hyperparameters, _ = grid_search(cache, config, seed, n_jobs=n_jobs)
    idx = np.arange(len(cache))
    fitted = fit_features(cache, config, hyperparameters.ngram_range, idx)
    X = feature_matrix(cache, config, fitted, idx)
    fit_seed = derive_seed(seed, _FIT, _config_key(config), 0, 0)
    X, y, w = balance_training(config, X, list(cache.labels), fit_seed, fitted.binary_columns)
    if config.model is ModelKind.LOGREG:
        model = train_logreg(X, y, hyperparameters.C, sample_weights=w, seed=fit_seed)
    else:
        model = train_forest(X, y, hyperparameters.n_estimators, hyperparameters.min_samples_split,
                             sample_weights=w, seed=fit_seed)
    return ModelBundle(model, fitted.vectorizer, fitted.scaler, config.id, hyperparameters.to_dict())
