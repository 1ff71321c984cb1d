"""One-vs-rest L2-regularized logistic regression trained by gradient descent."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

logger = logging.getLogger(__name__)

ARMIJO_C = 1e-4
MIN_STEP = 1e-20


def logistic_objective(w, b, X, z, s, C) -> float:
    """``||w||^2 / (2C) + sum_i s_i log(1 + exp(-z_i (w.x_i + b)))`` for one binary problem."""
    margin = z * (X @ w + b)
    return 0.5 / C * float(w @ w) + float(s @ np.logaddexp(0.0, -margin))


def logistic_gradient(w, b, X, z, s, C):
    """Analytic gradient of :func:`logistic_objective`; returns ``(grad_w, grad_b)``."""
    margin = z * (X @ w + b)
    r = -s * z * expit(-margin)
    return w / C + X.T @ r, float(r.sum())


@dataclass
class LogisticRegressionModel:
    labels: list
    weights: np.ndarray  # d x K
    bias: np.ndarray  # K
    C: float
    iterations: int = 0
    converged: bool = False
    label_iterations: list = field(default_factory=list)

    @property
    def width(self) -> int:
        return self.weights.shape[0]

    def decision(self, X) -> np.ndarray:
        if X.shape[1] != self.width:
            raise ValueError(f"feature width {X.shape[1]} does not match model width {self.width}")
        return np.asarray(X @ self.weights) + self.bias

    def predict_proba(self, X) -> np.ndarray:
        return expit(self.decision(X))

    def predict(self, X) -> list:
        # argmax returns the first maximum, i.e. the lowest label ordinal on ties
        return [self.labels[i] for i in np.argmax(self.predict_proba(X), axis=1)]


def _check_inputs(X, y, sample_weights):
    n = X.shape[0]
    if n != len(y):
        raise ValueError(f"X has {n} rows but y has {len(y)} labels")
    if n < 2:
        raise ValueError("need at least two training samples")
    if len(set(y)) < 2:
        raise ValueError("need at least two distinct labels")
    data = X.data if sp.issparse(X) else np.asarray(X)
    if not np.all(np.isfinite(data)):
        raise ValueError("feature matrix contains non-finite values")
    if sample_weights is None:
        return np.ones(n)
    s = np.asarray(sample_weights, dtype=np.float64)
    if s.shape != (n,) or np.any(s <= 0):
        raise ValueError("sample weights must be positive, one per sample")
    return s


def train_logreg(X, y, C: float, sample_weights=None, seed: int = 0, max_iters: int = 1000, tol: float = 1e-4,
                 trace: list | None = None) -> LogisticRegressionModel:
    """Fit one binary model per label, all labels advanced together.

    Each label minimizes its own objective with full-batch gradient descent;
    the trial step is the Barzilai-Borwein estimate from the previous
    iteration, shrunk by halving until the Armijo condition holds, so every
    accepted step lowers the objective. A label stops once its gradient
    infinity-norm drops below ``tol``. The bias is not regularized and all
    parameters start at zero, so the fit is deterministic (``seed`` is
    accepted for interface symmetry). When ``trace`` is a list, the per-label
    objective vector is appended after every iteration.
    """
    del seed
    s = _check_inputs(X, y, sample_weights)
    X = sp.csr_matrix(X, dtype=np.float64) if sp.issparse(X) else np.asarray(X, dtype=np.float64)
    XT = X.T.tocsr() if sp.issparse(X) else X.T
    labels = sorted(set(y))
    index = {label: k for k, label in enumerate(labels)}
    n, d, K = X.shape[0], X.shape[1], len(labels)
    Z = -np.ones((n, K))
    Z[np.arange(n), [index[v] for v in y]] = 1.0
    inv_c = 1.0 / C

    W = np.zeros((d, K))
    b = np.zeros(K)
    M = np.zeros((n, K))

    def gradient(W, M, Zc):
        R = -(s[:, None] * Zc) * expit(-Zc * M)
        return inv_c * W + np.asarray(XT @ R), R.sum(axis=0)

    f = s @ np.logaddexp(0.0, -Z * M)
    GW, Gb = gradient(W, M, Z)
    row_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel() if sp.issparse(X) else np.einsum("ij,ij->i", X, X)
    lipschitz = inv_c + 0.25 * float(s @ (row_sq + 1.0))
    step = np.full(K, 1.0 / lipschitz)
    active = np.ones(K, dtype=bool)
    label_iters = np.zeros(K, dtype=int)
    iteration = 0
    if trace is not None:
        trace.append(f.copy())
    while iteration < max_iters:
        gnorm = np.maximum(np.abs(GW).max(axis=0), np.abs(Gb))
        active &= gnorm >= tol
        if not active.any():
            break
        iteration += 1
        label_iters[active] += 1
        cols = np.flatnonzero(active)
        g_w, g_b = GW[:, cols], Gb[cols]
        g_sq = np.einsum("ij,ij->j", g_w, g_w) + g_b * g_b
        dM = np.asarray(X @ g_w) + g_b
        t = step[cols].copy()
        pending = np.ones(len(cols), dtype=bool)
        new_f = f[cols].copy()
        while pending.any():
            p = np.flatnonzero(pending)
            tp = t[p]
            Wc = W[:, cols[p]] - tp * g_w[:, p]
            Mc = M[:, cols[p]] - tp * dM[:, p]
            fc = 0.5 * inv_c * np.einsum("ij,ij->j", Wc, Wc) + s @ np.logaddexp(0.0, -Z[:, cols[p]] * Mc)
            ok = fc <= f[cols[p]] - ARMIJO_C * tp * g_sq[p]
            new_f[p[ok]] = fc[ok]
            pending[p[ok]] = False
            t[p[~ok]] *= 0.5
            stalled = p[~ok][t[p[~ok]] < MIN_STEP]
            if len(stalled):
                # no descent possible at machine precision: freeze these labels
                t[stalled] = 0.0
                new_f[stalled] = f[cols[stalled]]
                pending[stalled] = False
                active[cols[stalled]] = False
        W_old, GW_old, Gb_old = W[:, cols].copy(), g_w.copy(), g_b.copy()
        W[:, cols] -= t * g_w
        b[cols] -= t * g_b
        M[:, cols] -= t * dM
        f[cols] = new_f
        GW_new, Gb_new = gradient(W[:, cols], M[:, cols], Z[:, cols])
        GW[:, cols], Gb[cols] = GW_new, Gb_new
        # Barzilai-Borwein trial step for the next iteration
        sw = np.concatenate([W[:, cols] - W_old, (-t * g_b)[None, :]])
        yw = np.concatenate([GW_new - GW_old, (Gb_new - Gb_old)[None, :]])
        sy = np.einsum("ij,ij->j", sw, yw)
        ss = np.einsum("ij,ij->j", sw, sw)
        bb = np.where(sy > 0, ss / np.where(sy > 0, sy, 1.0), 2.0 * np.maximum(t, 1.0 / lipschitz))
        step[cols] = np.where(t > 0, bb, step[cols])
        if trace is not None:
            trace.append(f.copy())
    gnorm = np.maximum(np.abs(GW).max(axis=0), np.abs(Gb))
    converged = bool(np.all(gnorm < tol))
    if not converged:
        logger.debug("logistic regression stopped after %d iterations without reaching tol", iteration)
    return LogisticRegressionModel(
        labels=labels,
        weights=W,
        bias=b,
        C=C,
        iterations=iteration,
        converged=converged,
        label_iterations=label_iters.tolist(),
    )


def predict_logreg(model: LogisticRegressionModel, x):
    """Predict one sample; returns ``(label, {label: probability})``."""
    x = x if sp.issparse(x) else np.atleast_2d(np.asarray(x, dtype=np.float64))
    proba = model.predict_proba(x)[0]
    best = int(np.argmax(proba))
    return model.labels[best], {label: float(p) for label, p in zip(model.labels, proba)}
