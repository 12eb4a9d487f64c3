import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ideoclf.classical import LinearSvmModel, predict_nb, svm_objective, train_nb, train_svm
from ideoclf.rng import Rng
from oracles import nb_gaussian_precise_argmax, nb_multinomial_exact_argmax


def test_svm_separable_points():
    X = np.array([[0.0, 0.0], [2.0, 2.0]] * 10)
    y = np.array([0, 1] * 10)
    model = train_svm(X, y, seed=1)
    assert (model.predict(X) == y).mean() == 1.0


def test_svm_heavy_regularization_shrinks_weights():
    X = np.array([[0.0, 0.0], [2.0, 2.0]] * 10)
    y = np.array([0, 1] * 10)
    assert np.linalg.norm(train_svm(X, y, lam=1e6, seed=1).weights) < 1e-2


def test_svm_tie_goes_to_positive_class():
    model = LinearSvmModel(np.zeros(3), 0.0)
    assert model.predict(np.ones((1, 3))).tolist() == [1]


def test_svm_single_class_error():
    with pytest.raises(ValueError):
        train_svm(np.ones((4, 2)), [1, 1, 1, 1])


def _blobs(n=200, dim=5, seed=0, gap=1.0):
    rng = Rng(seed)
    y = np.arange(n) % 2
    X = rng.uniform(-1, 1, (n, dim)) + np.where(y[:, None] == 1, gap, -gap) * np.linspace(1, 0.2, dim)
    return X, y


def test_svm_objective_descends_after_warmup():
    X, y = _blobs()
    model = train_svm(X, y, lam=1e-2, epochs=40, seed=3)
    hist = model.objective_history
    assert len(hist) == 40
    for prev, cur in zip(hist[4:], hist[5:]):
        assert cur <= prev * 1.05
    ypm = np.where(y == 1, 1.0, -1.0)
    assert hist[-1] == pytest.approx(svm_objective(model.weights, model.bias, 1e-2, X, ypm))


def test_svm_deterministic():
    X, y = _blobs(60)
    a, b = train_svm(X, y, seed=5), train_svm(X, y, seed=5)
    assert a.weights.tobytes() == b.weights.tobytes() and a.bias == b.bias


def test_nb_multinomial_hand_values():
    model = train_nb([[2.0, 0.0], [0.0, 2.0]], [0, 1], "multinomial", alpha=1.0)
    assert math.exp(model.feature_log_probs[0, 0]) == pytest.approx(0.75)
    assert math.exp(model.feature_log_probs[1, 0]) == pytest.approx(0.25)
    np.testing.assert_allclose(model.class_log_priors, [math.log(0.5)] * 2)
    # class 0: 3 ln .75 ; class 1: 3 ln .25
    assert predict_nb(model, [3.0, 0.0]) == 0
    assert predict_nb(model, [0.0, 1.0]) == 1
    np.testing.assert_allclose(np.exp(model.feature_log_probs).sum(axis=1), 1.0, atol=1e-9)


def test_nb_zero_vector_uses_priors_and_ties_go_to_zero():
    model = train_nb([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [0, 1, 1], "multinomial")
    assert predict_nb(model, [0.0, 0.0]) == 1
    balanced = train_nb([[1.0, 0.0], [0.0, 1.0]], [0, 1], "multinomial")
    assert predict_nb(balanced, [0.0, 0.0]) == 0
    assert predict_nb(balanced, [1.0, 1.0]) == 0


def test_nb_gaussian_variance_floor():
    model = train_nb([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0], [4.0, 5.0]], [0, 0, 1, 1], "gaussian")
    assert model.variances[0, 1] == 1e-9 and model.variances[1, 1] == 1e-9
    assert np.all(np.isfinite(model.joint_log_likelihood([[2.5, 5.0]])))
    assert predict_nb(model, [1.2, 5.0]) == 0 and predict_nb(model, [3.9, 5.0]) == 1


def test_nb_negative_feature_rejected():
    with pytest.raises(ValueError, match="feature 1"):
        train_nb([[1.0, -0.5], [0.0, 1.0]], [0, 1], "multinomial")
    with pytest.raises(ValueError):
        train_nb([[1.0], [2.0]], [0, 0], "gaussian")
    with pytest.raises(ValueError):
        train_nb([[1.0], [2.0]], [0, 1], "bernoulli")


def test_nb_posterior_probabilities_sum_to_one():
    X, y = _blobs(40, 3)
    model = train_nb(X, y, "gaussian")
    p = model.predict_proba(X)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, rtol=1e-12)
    np.testing.assert_array_equal(p.argmax(axis=1), model.predict(X))


small_value = st.integers(0, 4).map(float)


@settings(max_examples=500, deadline=None)
@given(
    rows=st.lists(st.lists(small_value, min_size=3, max_size=3), min_size=2, max_size=4),
    labels=st.lists(st.integers(0, 1), min_size=4, max_size=4),
    dim=st.integers(1, 3),
    x=st.lists(small_value, min_size=3, max_size=3),
    variant=st.sampled_from(["multinomial", "gaussian"]),
)
def test_nb_matches_closed_form(rows, labels, dim, x, variant):
    labels = labels[: len(rows)]
    if set(labels) != {0, 1}:
        return
    rows = [r[:dim] for r in rows]
    x = x[:dim]
    model = train_nb(rows, labels, variant)
    if variant == "multinomial":
        expected = nb_multinomial_exact_argmax(rows, labels, x)
    else:
        expected = nb_gaussian_precise_argmax(rows, labels, x)
    assert predict_nb(model, x) == expected


@settings(max_examples=200, deadline=None)
@given(
    rows=st.lists(st.lists(small_value, min_size=3, max_size=3), min_size=2, max_size=6),
    x=st.lists(small_value, min_size=3, max_size=3),
    scale=st.floats(0.1, 50.0),
)
def test_nb_multinomial_scale_equivariance(rows, x, scale):
    labels = [k % 2 for k in range(len(rows))]
    if len(rows) % 2:
        rows, labels = rows[:-1], labels[:-1]
    model = train_nb(rows, labels, "multinomial")
    x = np.array(x)
    feat = lambda v: v @ model.feature_log_probs.T  # noqa: E731
    np.testing.assert_allclose(feat(scale * x), scale * feat(x), rtol=1e-12, atol=1e-12)
    a, b = feat(x)
    if abs(a - b) > 1e-9:
        assert predict_nb(model, scale * x) == predict_nb(model, x)
