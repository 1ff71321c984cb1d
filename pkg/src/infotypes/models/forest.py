"""Random forest of Gini decision trees with bootstrap sampling."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _tree

# A column counts as dense (read from a dense copy) above this fill ratio.
DENSE_FILL = 0.3


@dataclass
class DecisionTree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # weighted label histogram per node

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_votes(self) -> np.ndarray:
        """Majority label index of every node (lowest index on ties)."""
        return np.argmax(self.value, axis=1)


@dataclass
class RandomForestModel:
    labels: list
    trees: list
    width: int
    n_estimators: int
    min_samples_split: int
    seed: int
    max_features: int
    bootstrap: bool = True

    def votes(self, X, n_trees: int | None = None) -> np.ndarray:
        """Vote counts (n x K) from the first ``n_trees`` trees."""
        X = _as_csr(X)
        if X.shape[1] != self.width:
            raise ValueError(f"feature width {X.shape[1]} does not match model width {self.width}")
        trees = self.trees if n_trees is None else self.trees[:n_trees]
        counts = np.zeros((X.shape[0], len(self.labels)))
        rows = np.arange(X.shape[0])
        for tree in trees:
            leaves = _tree.apply_tree(X.indptr, X.indices, X.data, X.shape[0],
                                      tree.feature, tree.threshold, tree.left, tree.right)
            np.add.at(counts, (rows, tree.leaf_votes()[leaves]), 1.0)
        return counts

    def predict_proba(self, X, n_trees: int | None = None) -> np.ndarray:
        counts = self.votes(X, n_trees)
        return counts / counts.sum(axis=1, keepdims=True)

    def predict(self, X, n_trees: int | None = None) -> list:
        return [self.labels[i] for i in np.argmax(self.votes(X, n_trees), axis=1)]


def _as_csr(X) -> sp.csr_matrix:
    X = sp.csr_matrix(X, dtype=np.float64)
    X.sum_duplicates()
    X.sort_indices()
    return X


def tree_seeds(seed: int, n_estimators: int) -> list[np.random.SeedSequence]:
    """Independent per-tree streams; tree ``t`` depends only on (seed, t)."""
    return [np.random.SeedSequence(seed, spawn_key=(t,)) for t in range(n_estimators)]


def _column_store(X: sp.csr_matrix):
    csc = X.tocsc()
    csc.eliminate_zeros()
    csc.sort_indices()
    n, d = X.shape
    fill = np.diff(csc.indptr) / max(n, 1)
    dense_cols = np.flatnonzero(fill > DENSE_FILL)
    dense_map = np.full(d, -1, dtype=np.int64)
    dense_map[dense_cols] = np.arange(len(dense_cols))
    dense_t = np.ascontiguousarray(csc[:, dense_cols].toarray().T) if len(dense_cols) else np.zeros((0, n))
    return (csc.indptr.astype(np.int64), csc.indices.astype(np.int64), csc.data.astype(np.float64),
            dense_map, dense_t)


def resolve_max_features(max_features, d: int) -> int:
    if max_features in (None, "sqrt"):
        return max(1, math.ceil(math.sqrt(d)))
    return max(1, min(int(max_features), d))


def train_forest(X, y, n_estimators: int, min_samples_split: int, sample_weights=None, seed: int = 0,
                 bootstrap: bool = True, max_features="sqrt", n_jobs: int = 1) -> RandomForestModel:
    """Grow ``n_estimators`` unpruned trees.

    Each tree sees a bootstrap sample of size n (as per-row multiplicities)
    and considers ceil(sqrt(d)) random features per node, falling back to
    further features only when none of those can split the node. Sample
    weights scale the Gini counts. Trees are grown from streams derived from
    ``seed`` and the tree index, so the first t trees of a larger forest equal
    a forest of t trees and threading does not change the result.
    """
    n = X.shape[0]
    if n != len(y):
        raise ValueError(f"X has {n} rows but y has {len(y)} labels")
    if n < 2:
        raise ValueError("need at least two training samples")
    labels = sorted(set(y))
    if len(labels) < 2:
        raise ValueError("need at least two distinct labels")
    X = _as_csr(X)
    if not np.all(np.isfinite(X.data)):
        raise ValueError("feature matrix contains non-finite values")
    weights = np.ones(n) if sample_weights is None else np.asarray(sample_weights, dtype=np.float64)
    if weights.shape != (n,) or np.any(weights <= 0):
        raise ValueError("sample weights must be positive, one per sample")
    index = {label: k for k, label in enumerate(labels)}
    y_idx = np.array([index[v] for v in y], dtype=np.int64)
    store = _column_store(X)
    mtry = resolve_max_features(max_features, X.shape[1])

    def grow(ss: np.random.SeedSequence) -> DecisionTree:
        rng = np.random.default_rng(ss)
        if bootstrap:
            cnt = np.bincount(rng.integers(0, n, size=n), minlength=n).astype(np.int64)
        else:
            cnt = np.ones(n, dtype=np.int64)
        node_seed = int(rng.integers(0, 2**63 - 1))
        arrays = _tree.grow_tree(*store, y_idx, weights * cnt, cnt, len(labels), min_samples_split, mtry, node_seed)
        return DecisionTree(*arrays)

    seeds = tree_seeds(seed, n_estimators)
    if n_jobs == 1:
        trees = [grow(ss) for ss in seeds]
    else:
        with ThreadPoolExecutor(max_workers=None if n_jobs < 0 else n_jobs) as pool:
            trees = list(pool.map(grow, seeds))
    return RandomForestModel(labels, trees, X.shape[1], n_estimators, min_samples_split, seed, mtry, bootstrap)


def predict_forest(model: RandomForestModel, x):
    """Plurality vote for one sample; returns ``(label, {label: vote fraction})``."""
    proba = model.predict_proba(_as_csr(np.atleast_2d(x) if not sp.issparse(x) else x))[0]
    best = int(np.argmax(proba))
    return model.labels[best], {label: float(p) for label, p in zip(model.labels, proba)}
