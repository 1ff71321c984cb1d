"""Cross-validation splitters."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Fold:
    id: int
    train: np.ndarray
    test: np.ndarray


def stratified_kfold(labels, k: int = 5, seed: int = 0) -> list[np.ndarray]:
    """Split indices into ``k`` disjoint test folds preserving label proportions.

    Indices of each label are shuffled, the per-label lists are concatenated in
    label order and dealt to folds round-robin. Any label's share of a fold
    therefore differs from its share of another fold by at most one.
    """
    labels = list(labels)
    n = len(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} samples")
    rng = np.random.default_rng(seed)
    by_label = defaultdict(list)
    for i, label in enumerate(labels):
        by_label[label].append(i)
    order = np.concatenate([rng.permutation(by_label[label]) for label in sorted(by_label)])
    folds = [order[f::k] for f in range(k)]
    return [np.sort(f).astype(np.int64) for f in folds]


def kfold_splits(labels, k: int = 5, seed: int = 0) -> list[Fold]:
    n = len(labels)
    out = []
    for f, test in enumerate(stratified_kfold(labels, k, seed)):
        mask = np.ones(n, dtype=bool)
        mask[test] = False
        out.append(Fold(f, np.flatnonzero(mask), test))
    return out


def leave_one_issue_out(dataset) -> list[Fold]:
    """One fold per thread: its sentences form the test set, all others the training set."""
    groups = np.array([item.thread_index for item in dataset.items], dtype=np.int64)
    threads = sorted(set(groups.tolist()))
    if len(threads) < 2:
        raise ValueError("leave-one-issue-out needs at least two threads")
    return [
        Fold(f, np.flatnonzero(groups != t), np.flatnonzero(groups == t))
        for f, t in enumerate(threads)
    ]
