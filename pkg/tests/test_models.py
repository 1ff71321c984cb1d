import json

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from infotypes.corpus.types import InfoType
from infotypes.errors import ModelFormatError
from infotypes.features import StandardScaler, fit_vectorizer
from infotypes.models import (
    LogisticRegressionModel,
    RandomForestModel,
    load_model,
    logistic_gradient,
    logistic_objective,
    predict_forest,
    predict_logreg,
    save_model,
    train_forest,
    train_logreg,
)
from infotypes.models._tree import grow_tree
from infotypes.models.forest import DecisionTree, _column_store

A, B = InfoType.Motivation, InfoType.Workarounds


def test_logreg_separable_1d():
    X = np.array([[-1.0], [1.0]])
    model = train_logreg(X, [A, B], C=10)
    assert model.predict(X) == [A, B]
    assert predict_logreg(model, [-1.0])[0] == A


def test_logreg_starts_at_one_half():
    trace = []
    train_logreg(np.eye(3), ["a", "b", "c"], C=1, max_iters=1, trace=trace)
    assert np.allclose(trace[0], 3 * np.log(2))
    zero = LogisticRegressionModel(["a", "b"], np.zeros((2, 2)), np.zeros(2), 1.0)
    label, scores = predict_logreg(zero, [3.0, -1.0])
    assert label == "a" and scores == {"a": 0.5, "b": 0.5}
    one = LogisticRegressionModel(["a", "b"], np.ones((1, 2)), np.zeros(2), 1.0)
    assert predict_logreg(one, [0.0])[1]["a"] == 0.5


def test_logreg_width_mismatch():
    model = train_logreg(np.eye(2), ["a", "b"], C=1)
    with pytest.raises(ValueError, match="width"):
        model.predict(np.zeros((1, 3)))


@pytest.mark.parametrize("y", [["a", "a"], ["a"]])
def test_logreg_rejects_degenerate_labels(y):
    with pytest.raises(ValueError):
        train_logreg(np.zeros((len(y), 2)), y, C=1)


def test_logreg_rejects_non_finite():
    with pytest.raises(ValueError, match="non-finite"):
        train_logreg(np.array([[np.nan], [1.0]]), ["a", "b"], C=1)


@given(st.integers(0, 2**32 - 1), st.sampled_from([0.01, 0.1, 1.0, 10.0]))
@settings(max_examples=30)
def test_gradient_matches_finite_differences(seed, C):
    rng = np.random.default_rng(seed)
    n, d = 10, 8
    X = rng.normal(size=(n, d))
    z = rng.choice([-1.0, 1.0], size=n)
    s = rng.uniform(0.5, 2.0, size=n)
    w, b = rng.normal(size=d), float(rng.normal())
    gw, gb = logistic_gradient(w, b, X, z, s, C)
    eps = 1e-5
    fd = np.array([
        (logistic_objective(w + eps * e, b, X, z, s, C) - logistic_objective(w - eps * e, b, X, z, s, C)) / (2 * eps)
        for e in np.eye(d)
    ])
    fdb = (logistic_objective(w, b + eps, X, z, s, C) - logistic_objective(w, b - eps, X, z, s, C)) / (2 * eps)
    analytic = np.append(gw, gb)
    numeric = np.append(fd, fdb)
    assert np.max(np.abs(analytic - numeric)) / np.max(np.abs(numeric)) < 1e-5


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20)
def test_logreg_objective_never_increases(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(40, 5))
    y = rng.integers(0, 3, size=40).tolist()
    trace = []
    train_logreg(X, y, C=float(rng.choice([0.01, 1.0, 10.0])), sample_weights=rng.uniform(0.5, 2, 40), trace=trace)
    steps = np.diff(np.array(trace), axis=0)
    assert np.all(steps <= 1e-12 * np.abs(np.array(trace[:-1])) + 1e-12)


def test_logreg_accuracy_monotone_in_c_on_separable_data():
    rng = np.random.default_rng(1)
    X = np.vstack([rng.normal(-2, 1, size=(30, 2)), rng.normal(2, 1, size=(30, 2))])
    y = ["a"] * 30 + ["b"] * 30
    accs = [np.mean(np.array(train_logreg(X, y, C=c).predict(X)) == y) for c in (0.01, 0.1, 1.0, 10.0)]
    assert all(b >= a for a, b in zip(accs, accs[1:]))


def test_logreg_matches_weighted_sparse_and_dense():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(50, 6)) * (rng.random((50, 6)) < 0.4)
    y = rng.integers(0, 3, size=50).tolist()
    w = rng.uniform(0.5, 3, size=50)
    dense = train_logreg(X, y, C=1.0, sample_weights=w)
    sparse = train_logreg(sp.csr_matrix(X), y, C=1.0, sample_weights=w)
    np.testing.assert_allclose(dense.weights, sparse.weights, atol=1e-10)
    assert dense.converged


def test_forest_memorizes_four_points():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    y = [A, B, B, A]
    forest = train_forest(X, y, n_estimators=1, min_samples_split=2, bootstrap=False, seed=0)
    assert forest.predict(X) == y


def test_forest_determinism_and_prefixes():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(60, 5))
    y = rng.integers(0, 3, size=60).tolist()
    a = train_forest(X, y, 12, 2, seed=3)
    b = train_forest(X, y, 12, 2, seed=3, n_jobs=2)
    c = train_forest(X, y, 5, 2, seed=3)
    for ta, tb in zip(a.trees, b.trees):
        np.testing.assert_array_equal(ta.feature, tb.feature)
        np.testing.assert_array_equal(ta.threshold, tb.threshold)
    np.testing.assert_array_equal(a.votes(X, n_trees=5), c.votes(X))


def test_constant_label_sample_grows_a_single_leaf():
    X = sp.csr_matrix(np.random.default_rng(0).normal(size=(10, 3)))
    store = _column_store(X)
    y = np.zeros(10, dtype=np.int64)
    cnt = np.ones(10, dtype=np.int64)
    feature, _, left, _, value = grow_tree(*store, y, np.ones(10), cnt, 2, 2, 2, 0)
    assert len(feature) == 1 and left[0] == -1
    assert value[0].tolist() == [10.0, 0.0]


def test_forest_rejects_constant_labels():
    with pytest.raises(ValueError, match="two distinct labels"):
        train_forest(np.eye(3), [A, A, A], 3, 2)


def test_pure_nodes_are_leaves():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    forest = train_forest(X, [A, A, B, B], 1, 2, bootstrap=False, seed=0)
    (tree,) = forest.trees
    assert tree.n_nodes == 3
    leaves = tree.left < 0
    assert np.all((tree.value[leaves] > 0).sum(axis=1) == 1)


def test_forest_structural_invariants():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(80, 4))
    y = rng.integers(0, 4, size=80).tolist()
    forest = train_forest(X, y, 5, 5, seed=1)
    for t in forest.trees:
        internal = t.left >= 0
        assert np.all((t.left >= 0) == (t.right >= 0))
        assert np.all(t.feature[internal] >= 0)
        assert np.all(t.value[~internal].sum(axis=1) > 0)


def _votes_model(votes):
    """A forest of stump-free trees each voting a fixed label index."""
    trees = []
    for v in votes:
        value = np.zeros((1, 2))
        value[0, v] = 1.0
        trees.append(DecisionTree(np.array([-1]), np.zeros(1), np.array([-1]), np.array([-1]), value))
    return RandomForestModel([A, B], trees, 1, len(trees), 2, 0, 1)


def test_forest_voting_rules():
    assert predict_forest(_votes_model([0, 1]), [0.0])[0] == A
    label, scores = predict_forest(_votes_model([1] * 7 + [0] * 3), [0.0])
    assert label == B and scores[B] == pytest.approx(0.7)
    assert predict_forest(_votes_model([1, 1]), [0.0])[1][B] == 1.0


def test_forest_width_mismatch():
    with pytest.raises(ValueError, match="width"):
        _votes_model([0]).predict(np.zeros((1, 2)))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15)
def test_forest_fits_training_data_without_bootstrap(seed):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 4, size=(40, 3)).astype(float)
    X = np.unique(X, axis=0)
    y = rng.integers(0, 3, size=len(X)).tolist()
    if len(set(y)) < 2:
        return
    forest = train_forest(sp.csr_matrix(X), y, 1, 2, bootstrap=False, seed=seed)
    assert forest.predict(X) == y


def _small_bundle(kind):
    rng = np.random.default_rng(0)
    docs = [["a", "b"], ["b", "c"], ["c", "d"], ["a", "d"]]
    vec = fit_vectorizer(docs, (1, 2))
    scaler = StandardScaler().fit(rng.normal(size=(4, 17)))
    X = rng.normal(size=(40, vec.width))
    y = [A, B, InfoType.SocialConversation, A] * 10
    if kind == "logreg":
        model = train_logreg(X, y, C=1.0)
    else:
        model = train_forest(X, y, 7, 2, seed=1)
    return model, vec, scaler, rng.normal(size=(100, vec.width))


@pytest.mark.parametrize("kind", ["logreg", "forest"])
def test_model_round_trip(tmp_path, kind):
    model, vec, scaler, probe = _small_bundle(kind)
    path = tmp_path / "m.itm.json"
    save_model(model, vec, scaler, path, config="LBC", hyperparameters={"C": 1.0})
    bundle = load_model(path)
    assert bundle.model.predict(probe) == model.predict(probe)
    np.testing.assert_array_equal(bundle.model.predict_proba(probe), model.predict_proba(probe))
    assert bundle.vectorizer.vocabulary == vec.vocabulary
    np.testing.assert_array_equal(bundle.scaler.mean, scaler.mean)
    assert bundle.config == "LBC" and bundle.model.labels == model.labels
    obj = json.loads(path.read_text())
    assert obj["format_version"] == 1 and obj["kind"] == kind


def test_corrupted_bundle_reports_byte_offset(tmp_path):
    path = tmp_path / "m.itm.json"
    path.write_text('{"format_version": 1, "ké": [')
    with pytest.raises(ModelFormatError, match="byte 30"):
        load_model(path)


def test_future_version_rejected(tmp_path):
    model, vec, scaler, _ = _small_bundle("logreg")
    path = tmp_path / "m.itm.json"
    save_model(model, vec, scaler, path)
    obj = json.loads(path.read_text())
    obj["format_version"] = 99
    path.write_text(json.dumps(obj))
    with pytest.raises(ModelFormatError, match="format_version 99"):
        load_model(path)


def test_missing_bundle(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_model(tmp_path / "nope.itm.json")
