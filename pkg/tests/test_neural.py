import math

import numpy as np
import pytest

from ideoclf import neural
from ideoclf.neural import RnnConfig, TrainingError
from ideoclf.rng import Rng
from oracles import rnn_gradient_check


def _perturbed(config, seed):
    """Glorot init plus noise so biases and the head are far from zero."""
    rng = Rng(seed)
    params = neural.init_params(config, rng)
    for name in sorted(params):
        params[name] = params[name] + rng.uniform(-0.5, 0.5, params[name].shape)
    return params


def _inputs(mode, rng, n=2, dim=3, vocab_rows=7, length=5):
    if mode == "single_step":
        return rng.uniform(-1, 1, (n, dim)), None
    emb = rng.uniform(-1, 1, (vocab_rows, dim))
    emb[0] = 0
    lengths = np.array([length, max(1, length - 2)] + [length] * (n - 2))[:n]
    ids = np.zeros((n, length + 2), dtype=np.int64)
    for row, L in enumerate(lengths):
        ids[row, :L] = 1 + (rng.random(L) * (vocab_rows - 1)).astype(int)
    return (ids, lengths), emb


def test_zero_weights_give_uniform_probabilities():
    for cell in ("lstm", "gru"):
        config = RnnConfig(cell=cell, input_mode="single_step", input_dim=4, hidden_units=3)
        probs = neural.forward(neural.zero_params(config), config, np.array([[1.0, -2.0, 3.0, 0.5]]))
        np.testing.assert_array_equal(probs, [[0.5, 0.5]])


def test_lstm_single_step_hand_trace():
    config = RnnConfig(cell="lstm", input_mode="single_step", input_dim=1, hidden_units=1)
    p = neural.zero_params(config)
    w = {"f": (0.5, 0.1), "i": (-0.3, 0.2), "o": (0.8, -0.1), "c": (1.2, 0.05)}
    for gate, (weight, bias) in w.items():
        p[f"W_{gate}"][0, 0] = weight
        p[f"U_{gate}"][0, 0] = 0.7  # irrelevant: h_prev is zero on the first step
        p[f"b_{gate}"][0] = bias
    p["W_y"][0] = [1.5, -0.5]
    p["b_y"][:] = [0.1, -0.2]
    x = 0.9

    def sig(a):
        return 1 / (1 + math.exp(-a))

    f = sig(0.5 * x + 0.1)
    i = sig(-0.3 * x + 0.2)
    o = sig(0.8 * x - 0.1)
    g = math.tanh(1.2 * x + 0.05)
    c = f * 0.0 + i * g
    h = o * math.tanh(c)
    z0, z1 = 1.5 * h + 0.1, -0.5 * h - 0.2
    expected = [math.exp(z0) / (math.exp(z0) + math.exp(z1)), math.exp(z1) / (math.exp(z0) + math.exp(z1))]
    got = neural.forward(p, config, np.array([[x]]))[0]
    np.testing.assert_allclose(got, expected, rtol=1e-14)


def test_gru_single_step_hand_trace():
    config = RnnConfig(cell="gru", input_mode="single_step", input_dim=1, hidden_units=1)
    p = neural.zero_params(config)
    p["W_z"][0, 0], p["b_z"][0] = 0.4, -0.1
    p["W_r"][0, 0], p["b_r"][0] = -0.6, 0.3
    p["W_h"][0, 0], p["b_h"][0] = 1.1, 0.2
    p["W_y"][0] = [2.0, -1.0]
    x = -0.7
    z = 1 / (1 + math.exp(-(0.4 * x - 0.1)))
    ht = math.tanh(1.1 * x + 0.2)
    h = (1 - z) * 0.0 + z * ht
    z0, z1 = 2.0 * h, -1.0 * h
    expected = math.exp(z0) / (math.exp(z0) + math.exp(z1))
    assert neural.forward(p, config, np.array([[x]]))[0, 0] == pytest.approx(expected, rel=1e-14)


def test_loss_values():
    assert neural.loss([[1.0, 0.0]], [0]) == 0.0
    assert neural.loss([[0.5, 0.5]], [1]) == pytest.approx(math.log(2), rel=1e-15)
    assert neural.loss([[0.25, 0.75]], [1]) == pytest.approx(0.287682072451781, rel=1e-12)
    assert neural.loss([[1.0, 0.0]], [1]) == pytest.approx(-math.log(1e-12))


@pytest.mark.parametrize("cell", ["lstm", "gru"])
@pytest.mark.parametrize("mode", ["single_step", "sequence"])
def test_gradients_match_finite_differences(cell, mode):
    rng = Rng(17)
    config = RnnConfig(cell=cell, input_mode=mode, input_dim=3, hidden_units=4)
    params = _perturbed(config, 2)
    inputs, emb = _inputs(mode, rng)
    worst, checked = rnn_gradient_check(neural, params, config, inputs, np.array([0, 1]), emb, 60, rng)
    assert checked >= 50
    assert worst < 1e-4


def test_balanced_batch_head_bias_gradient_is_antisymmetric():
    config = RnnConfig(cell="lstm", input_mode="single_step", input_dim=3, hidden_units=5, seed=4)
    params = neural.init_params(config)
    params["W_y"][:] = 0.0
    x = Rng(1).uniform(-1, 1, (4, 3))
    _, grads = neural.backward(params, config, x, np.array([0, 1, 0, 1]))
    assert grads["b_y"][0] == pytest.approx(-grads["b_y"][1], abs=1e-15)
    assert grads["b_y"][0] == pytest.approx(0.0, abs=1e-15)
    _, grads = neural.backward(params, config, x[:3], np.array([0, 1, 0]))
    assert grads["b_y"][0] == pytest.approx(-grads["b_y"][1], rel=1e-12)


@pytest.mark.parametrize("cell", ["lstm", "gru"])
def test_duplicated_sample_gradient_equals_single(cell):
    config = RnnConfig(cell=cell, input_mode="sequence", input_dim=3, hidden_units=4)
    params = _perturbed(config, 8)
    (ids, lengths), emb = _inputs("sequence", Rng(2), n=2)
    single = neural.backward(params, config, (ids[:1], lengths[:1]), np.array([1]), emb)
    double = neural.backward(params, config, (np.repeat(ids[:1], 2, 0), np.repeat(lengths[:1], 2)), np.array([1, 1]), emb)
    assert single[0] == pytest.approx(double[0], rel=1e-14)
    for name in single[1]:
        np.testing.assert_allclose(double[1][name], single[1][name], rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("cell", ["lstm", "gru"])
def test_padding_never_changes_output(cell):
    config = RnnConfig(cell=cell, input_mode="sequence", input_dim=3, hidden_units=4)
    params = _perturbed(config, 3)
    (ids, lengths), emb = _inputs("sequence", Rng(6), n=2, length=4)
    base = neural.forward(params, config, (ids, lengths), emb)
    padded = np.concatenate([ids, np.zeros((2, 10), dtype=np.int64)], axis=1)
    np.testing.assert_array_equal(neural.forward(params, config, (padded, lengths), emb), base)
    # samples of different length batched together match running each alone
    alone = np.vstack([neural.forward(params, config, (ids[k:k + 1], lengths[k:k + 1]), emb) for k in range(2)])
    np.testing.assert_allclose(base, alone, rtol=1e-13)


def test_zero_length_sequence_uses_initial_state():
    config = RnnConfig(cell="gru", input_mode="sequence", input_dim=3, hidden_units=4)
    params = _perturbed(config, 3)
    emb = np.ones((5, 3))
    probs = neural.forward(params, config, (np.zeros((1, 6), dtype=np.int64), np.array([0])), emb)
    z = params["b_y"]
    np.testing.assert_allclose(probs[0], np.exp(z) / np.exp(z).sum(), rtol=1e-14)


def test_softmax_normalization():
    config = RnnConfig(cell="lstm", input_mode="single_step", input_dim=5, hidden_units=6)
    params = _perturbed(config, 1)
    probs = neural.forward(params, config, Rng(0).uniform(-10, 10, (50, 5)))
    assert np.all(np.abs(probs.sum(axis=1) - 1) <= 1e-12)
    assert np.all((probs > 0) & (probs < 1))


def test_clipping_bounds_global_norm():
    grads = {"a": np.full((3, 3), 10.0), "b": np.full(4, -7.0)}
    before = neural.clip_gradients(grads, 5.0)
    after = math.sqrt(sum(float((g * g).sum()) for g in grads.values()))
    assert before > 5.0 and after <= 5.0 + 1e-9
    small = {"a": np.array([0.1, 0.2])}
    neural.clip_gradients(small, 5.0)
    np.testing.assert_array_equal(small["a"], [0.1, 0.2])


def test_rmsprop_update_rule():
    params = {"w": np.array([1.0, -2.0])}
    state = neural.RmspropState.zeros_like(params)
    neural.rmsprop_step(params, {"w": np.array([0.5, 0.0])}, state, lr=0.1, rho=0.9, epsilon=1e-7)
    s = 0.1 * 0.25
    np.testing.assert_allclose(state.accumulators["w"], [s, 0.0])
    np.testing.assert_allclose(params["w"], [1.0 - 0.1 * 0.5 / (math.sqrt(s) + 1e-7), -2.0])
    assert np.all(state.accumulators["w"] >= 0)


def _toy_set(n=40, dim=4, seed=0):
    rng = Rng(seed)
    y = np.arange(n) % 2
    x = rng.uniform(-1, 1, (n, dim)) + np.where(y[:, None] == 1, 1.5, -1.5)
    return x, y


def test_lr_zero_leaves_params_unchanged():
    config = RnnConfig(cell="gru", input_mode="single_step", input_dim=4, hidden_units=5, lr=0.0, epochs=3, seed=9)
    x, y = _toy_set()
    result = neural.train(config, x, y)
    init = neural.init_params(config, Rng(9))
    for name in init:
        np.testing.assert_array_equal(result.params[name], init[name])


@pytest.mark.parametrize("cell", ["lstm", "gru"])
def test_single_sample_memorization(cell):
    # default width (300 hidden units)
    config = RnnConfig(cell=cell, input_mode="single_step", input_dim=4, epochs=200, seed=1)
    result = neural.train(config, np.array([[0.3, -0.2, 0.8, 0.1]]), np.array([1]))
    assert result.history[-1]["train_loss"] < 0.01


def test_training_is_deterministic_and_learns():
    config = RnnConfig(cell="lstm", input_mode="single_step", input_dim=4, hidden_units=16, epochs=20, batch_size=8, seed=3)
    x, y = _toy_set()
    r1 = neural.train(config, x, y, valid=(x[:10], y[:10]))
    r2 = neural.train(config, x, y, valid=(x[:10], y[:10]))
    assert r1.history == r2.history
    assert "valid_loss" in r1.history[0]
    assert r1.history[-1]["train_loss"] < r1.history[0]["train_loss"]
    acc = (neural.predict_proba(r1.params, config, x).argmax(axis=1) == y).mean()
    assert acc >= 0.99


def test_non_finite_loss_aborts():
    config = RnnConfig(cell="lstm", input_mode="single_step", input_dim=2, hidden_units=3, epochs=1)
    x = np.array([[np.nan, 1.0], [0.0, 1.0]])
    with pytest.raises(TrainingError, match="epoch 1, batch 1"):
        neural.train(config, x, np.array([0, 1]))


def test_config_validation():
    with pytest.raises(ValueError):
        RnnConfig(cell="rnn")
    with pytest.raises(ValueError):
        RnnConfig(rho=1.0)
    with pytest.raises(ValueError):
        RnnConfig(hidden_units=0)
    with pytest.raises(ValueError):
        RnnConfig(clip_norm=0)


def test_glorot_init_and_forget_bias():
    config = RnnConfig(cell="lstm", input_mode="single_step", input_dim=10, hidden_units=6)
    params = neural.init_params(config)
    limit = math.sqrt(6 / 16)
    assert np.abs(params["W_f"]).max() <= limit
    np.testing.assert_array_equal(params["b_f"], 1.0)
    np.testing.assert_array_equal(params["b_i"], 0.0)
