"""Class-imbalance handling: balanced class weights and SMOTE over-sampling."""

from __future__ import annotations

import logging
from collections import Counter

import numpy as np
import scipy.sparse as sp

from .errors import SmoteError

logger = logging.getLogger(__name__)


def compute_class_weights(labels) -> dict:
    """Balanced weights ``N / (K * n_c)`` so every label carries equal total weight."""
    counts = Counter(labels)
    if not counts:
        raise ValueError("no labels given")
    n, k = sum(counts.values()), len(counts)
    return {label: n / (k * counts[label]) for label in sorted(counts)}


def sample_weights(labels, class_weights: dict) -> np.ndarray:
    return np.array([class_weights[label] for label in labels], dtype=np.float64)


def _neighbors(Xc, k: int) -> np.ndarray:
    """Indices of the ``k`` nearest other rows (Euclidean) for every row of ``Xc``."""
    if sp.issparse(Xc):
        gram = (Xc @ Xc.T).toarray()
    else:
        gram = Xc @ Xc.T
    sq = np.diag(gram).copy()
    dist = sq[:, None] + sq[None, :] - 2.0 * gram
    np.fill_diagonal(dist, np.inf)
    return np.argsort(dist, axis=1, kind="stable")[:, :k]


def _interpolate(X, base, other, lam, binary_columns):
    if sp.issparse(X):
        A, B = X[base], X[other]
        out = A + sp.diags(lam) @ (B - A)
        # rounding can overshoot a parent by an ulp
        out = out.minimum(A.maximum(B)).maximum(A.minimum(B))
        if binary_columns:
            keep = np.ones(X.shape[1])
            keep[list(binary_columns)] = 0.0
            out = out @ sp.diags(keep)
            cols = list(binary_columns)
            snapped = np.where(lam[:, None] >= 0.5, B[:, cols].toarray(), A[:, cols].toarray())
            rows, idx = np.nonzero(snapped)
            out = out + sp.csr_matrix(
                (snapped[rows, idx], (rows, np.asarray(cols)[idx])), shape=out.shape
            )
        return sp.csr_matrix(out)
    A, B = X[base], X[other]
    out = np.clip(A + lam[:, None] * (B - A), np.minimum(A, B), np.maximum(A, B))
    if binary_columns:
        cols = list(binary_columns)
        out[:, cols] = np.where(lam[:, None] >= 0.5, B[:, cols], A[:, cols])
    return out


def smote_resample(X, y, k: int = 5, seed: int = 0, binary_columns=(), skip_singletons: bool = False,
                   return_parents: bool = False):
    """Over-sample every non-majority label up to the majority count.

    Each synthetic row lies on the segment between a random member of the
    label and one of its ``k`` nearest same-label neighbours. Columns listed in
    ``binary_columns`` take the value of whichever parent is nearer in the
    interpolation (threshold at 0.5), so flags and one-hot groups stay valid.
    Originals are returned first and unchanged. Labels with a single sample
    raise :class:`SmoteError`, or are left as they are with ``skip_singletons``.
    With ``return_parents`` a third value gives, for every synthetic row, the
    indices of its two parent rows in ``X`` as an ``(m, 2)`` array.
    """
    y = list(y)
    if X.shape[0] != len(y):
        raise ValueError("X and y differ in length")
    dense = not sp.issparse(X)
    X = np.asarray(X, dtype=np.float64) if dense else sp.csr_matrix(X, dtype=np.float64)
    counts = Counter(y)
    target = max(counts.values())
    rng = np.random.default_rng(seed)
    blocks, labels_out, parents = [X], list(y), [np.empty((0, 2), dtype=np.int64)]
    for label in sorted(counts):
        n_c = counts[label]
        if n_c == target:
            continue
        if n_c < 2:
            if skip_singletons:
                logger.warning("label %s has a single sample; left un-oversampled", label)
                continue
            raise SmoteError(
                f"label {label} has only one sample; duplicate it or exclude the label before SMOTE"
            )
        members = np.array([i for i, v in enumerate(y) if v == label])
        kk = min(k, n_c - 1)
        nbrs = _neighbors(X[members], kk)
        need = target - n_c
        base = rng.integers(n_c, size=need)
        pick = rng.integers(kk, size=need)
        lam = rng.random(need)
        other = nbrs[base, pick]
        blocks.append(_interpolate(X, members[base], members[other], lam, binary_columns))
        labels_out.extend([label] * need)
        parents.append(np.column_stack([members[base], members[other]]))
    out = np.vstack(blocks) if dense else sp.vstack(blocks, format="csr")
    if return_parents:
        return out, labels_out, np.vstack(parents)
    return out, labels_out
