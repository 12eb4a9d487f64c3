"""LSTM and GRU classifiers with a dense softmax head, trained by BPTT and RMSprop.

Inputs come in two shapes:

* ``sequence`` mode: ``(ids, lengths)`` with ``ids`` an ``(N, L)`` integer
  array of embedding rows and ``lengths`` the true sequence lengths. Each
  sample's recurrence runs for exactly ``lengths[n]`` steps, so padding never
  influences the output. The embedding matrix is frozen.
* ``single_step`` mode: an ``(N, d)`` float array, fed as one timestep.

Matrices multiply from the right (``x @ W``): input-to-hidden weights are
``(input_dim, hidden)``, hidden-to-hidden ``(hidden, hidden)``, and the head
``W_y`` is ``(hidden, num_classes)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .rng import Rng

LSTM_GATES = ("f", "i", "o", "c")
GRU_GATES = ("z", "r", "h")
PROB_FLOOR = 1e-12


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class RnnConfig:
    cell: str = "lstm"
    input_mode: str = "sequence"
    input_dim: int = 100
    hidden_units: int = 300
    num_classes: int = 2
    lr: float = 1e-3
    rho: float = 0.9
    epsilon: float = 1e-7
    batch_size: int = 32
    epochs: int = 10
    clip_norm: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.cell not in ("lstm", "gru"):
            raise ValueError(f"unknown cell {self.cell!r}")
        if self.input_mode not in ("sequence", "single_step"):
            raise ValueError(f"unknown input_mode {self.input_mode!r}")
        if self.hidden_units < 1 or self.input_dim < 1 or self.batch_size < 1:
            raise ValueError("hidden_units, input_dim and batch_size must be >= 1")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        if self.epsilon <= 0 or self.clip_norm <= 0 or self.lr < 0:
            raise ValueError("epsilon and clip_norm must be > 0 and lr >= 0")

    @property
    def gates(self) -> tuple[str, ...]:
        return LSTM_GATES if self.cell == "lstm" else GRU_GATES

    def to_dict(self) -> dict:
        return asdict(self)


def param_names(config: RnnConfig) -> list[str]:
    g = config.gates
    return [f"W_{k}" for k in g] + [f"U_{k}" for k in g] + [f"b_{k}" for k in g] + ["W_y", "b_y"]


def param_shapes(config: RnnConfig) -> dict[str, tuple[int, ...]]:
    d, h, k = config.input_dim, config.hidden_units, config.num_classes
    shapes = {}
    for gate in config.gates:
        shapes[f"W_{gate}"] = (d, h)
        shapes[f"U_{gate}"] = (h, h)
        shapes[f"b_{gate}"] = (h,)
    shapes["W_y"] = (h, k)
    shapes["b_y"] = (k,)
    return shapes


def init_params(config: RnnConfig, rng: Rng | None = None) -> dict[str, np.ndarray]:
    """Glorot-uniform matrices, zero biases, forget-gate bias 1 for LSTM."""
    rng = rng or Rng(config.seed)
    params = {}
    for name, shape in param_shapes(config).items():
        if len(shape) == 2:
            limit = math.sqrt(6.0 / (shape[0] + shape[1]))
            params[name] = rng.uniform(-limit, limit, shape)
        else:
            params[name] = np.zeros(shape)
    if config.cell == "lstm":
        params["b_f"][:] = 1.0
    return params


def zero_params(config: RnnConfig) -> dict[str, np.ndarray]:
    return {name: np.zeros(shape) for name, shape in param_shapes(config).items()}


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _as_steps(config: RnnConfig, inputs, embeddings):
    """Turn model inputs into a ``(N, T, d)`` step tensor plus ``(N,)`` lengths."""
    if config.input_mode == "single_step":
        x = np.asarray(inputs, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.shape[1] != config.input_dim:
            raise ValueError(f"expected feature dim {config.input_dim}, got {x.shape[1]}")
        return x[:, None, :], np.ones(len(x), dtype=np.int64)
    if embeddings is None:
        raise ValueError("sequence mode needs the embedding matrix")
    ids, lengths = inputs
    ids = np.atleast_2d(np.asarray(ids, dtype=np.int64))
    lengths = np.atleast_1d(np.asarray(lengths, dtype=np.int64))
    steps = int(lengths.max()) if len(lengths) else 0
    return embeddings[ids[:, :steps]], lengths


def _cat(params, prefix, gates):
    return np.concatenate([params[f"{prefix}_{g}"] for g in gates], axis=-1)


def _lstm_forward(params, x, lengths):
    n, steps, _ = x.shape
    hsz = params["U_f"].shape[0]
    W, U, b = _cat(params, "W", LSTM_GATES), _cat(params, "U", LSTM_GATES), _cat(params, "b", LSTM_GATES)
    xw = x @ W + b
    h = np.zeros((n, hsz))
    c = np.zeros((n, hsz))
    cache = []
    for t in range(steps):
        m = (t < lengths)[:, None].astype(np.float64)
        a = xw[:, t] + h @ U
        f = _sigmoid(a[:, :hsz])
        i = _sigmoid(a[:, hsz:2 * hsz])
        o = _sigmoid(a[:, 2 * hsz:3 * hsz])
        g = np.tanh(a[:, 3 * hsz:])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        cache.append((h, c, f, i, o, g, tc, m))
        c = m * c_new + (1.0 - m) * c
        h = m * h_new + (1.0 - m) * h
    return h, cache


def _lstm_backward(params, x, cache, dh):
    hsz = dh.shape[1]
    U = _cat(params, "U", LSTM_GATES)
    dW = np.zeros((x.shape[2], 4 * hsz))
    dU = np.zeros((hsz, 4 * hsz))
    db = np.zeros(4 * hsz)
    dc = np.zeros_like(dh)
    for t in range(len(cache) - 1, -1, -1):
        h_prev, c_prev, f, i, o, g, tc, m = cache[t]
        dh_new = m * dh
        dc_new = m * dc + dh_new * o * (1.0 - tc * tc)
        da = np.concatenate(
            [
                dc_new * c_prev * f * (1.0 - f),
                dc_new * g * i * (1.0 - i),
                dh_new * tc * o * (1.0 - o),
                dc_new * i * (1.0 - g * g),
            ],
            axis=1,
        )
        dW += x[:, t].T @ da
        dU += h_prev.T @ da
        db += da.sum(axis=0)
        dh = (1.0 - m) * dh + da @ U.T
        dc = (1.0 - m) * dc + dc_new * f
    grads = {}
    for k, gate in enumerate(LSTM_GATES):
        sl = slice(k * hsz, (k + 1) * hsz)
        grads[f"W_{gate}"] = dW[:, sl]
        grads[f"U_{gate}"] = dU[:, sl]
        grads[f"b_{gate}"] = db[sl]
    return grads


def _gru_forward(params, x, lengths):
    n, steps, _ = x.shape
    hsz = params["U_z"].shape[0]
    W, b = _cat(params, "W", GRU_GATES), _cat(params, "b", GRU_GATES)
    U_zr = _cat(params, "U", ("z", "r"))
    U_h = params["U_h"]
    xw = x @ W + b
    h = np.zeros((n, hsz))
    cache = []
    for t in range(steps):
        m = (t < lengths)[:, None].astype(np.float64)
        a_zr = xw[:, t, :2 * hsz] + h @ U_zr
        z = _sigmoid(a_zr[:, :hsz])
        r = _sigmoid(a_zr[:, hsz:])
        rh = r * h
        ht = np.tanh(xw[:, t, 2 * hsz:] + rh @ U_h)
        h_new = (1.0 - z) * h + z * ht
        cache.append((h, z, r, rh, ht, m))
        h = m * h_new + (1.0 - m) * h
    return h, cache


def _gru_backward(params, x, cache, dh):
    hsz = dh.shape[1]
    U_z, U_r, U_h = params["U_z"], params["U_r"], params["U_h"]
    dW = np.zeros((x.shape[2], 3 * hsz))
    dU = {gate: np.zeros((hsz, hsz)) for gate in GRU_GATES}
    db = np.zeros(3 * hsz)
    for t in range(len(cache) - 1, -1, -1):
        h_prev, z, r, rh, ht, m = cache[t]
        dh_new = m * dh
        da_z = dh_new * (ht - h_prev) * z * (1.0 - z)
        da_h = dh_new * z * (1.0 - ht * ht)
        d_rh = da_h @ U_h.T
        da_r = d_rh * h_prev * r * (1.0 - r)
        da = np.concatenate([da_z, da_r, da_h], axis=1)
        dW += x[:, t].T @ da
        db += da.sum(axis=0)
        dU["z"] += h_prev.T @ da_z
        dU["r"] += h_prev.T @ da_r
        dU["h"] += rh.T @ da_h
        dh = (1.0 - m) * dh + dh_new * (1.0 - z) + d_rh * r + da_z @ U_z.T + da_r @ U_r.T
    grads = {}
    for k, gate in enumerate(GRU_GATES):
        sl = slice(k * hsz, (k + 1) * hsz)
        grads[f"W_{gate}"] = dW[:, sl]
        grads[f"U_{gate}"] = dU[gate]
        grads[f"b_{gate}"] = db[sl]
    return grads


def _run(params, config, inputs, embeddings):
    x, lengths = _as_steps(config, inputs, embeddings)
    if config.cell == "lstm":
        h, cache = _lstm_forward(params, x, lengths)
    else:
        h, cache = _gru_forward(params, x, lengths)
    probs = _softmax(h @ params["W_y"] + params["b_y"])
    return probs, h, x, cache


def forward(params, config: RnnConfig, inputs, embeddings=None) -> np.ndarray:
    """Class probabilities, one row per sample."""
    return _run(params, config, inputs, embeddings)[0]


def loss(probs, labels) -> float:
    """Mean of ``-ln p[label]`` with probabilities floored at 1e-12."""
    probs = np.atleast_2d(np.asarray(probs, dtype=np.float64))
    labels = np.atleast_1d(np.asarray(labels, dtype=np.int64))
    picked = probs[np.arange(len(labels)), labels]
    return float(-np.log(np.maximum(picked, PROB_FLOOR)).mean())


def backward(params, config: RnnConfig, inputs, labels, embeddings=None):
    """Mean batch loss and its exact gradient for every parameter."""
    labels = np.asarray(labels, dtype=np.int64)
    probs, h, x, cache = _run(params, config, inputs, embeddings)
    n = len(labels)
    dlogits = probs.copy()
    dlogits[np.arange(n), labels] -= 1.0
    dlogits /= n
    dh = dlogits @ params["W_y"].T
    if config.cell == "lstm":
        grads = _lstm_backward(params, x, cache, dh)
    else:
        grads = _gru_backward(params, x, cache, dh)
    grads["W_y"] = h.T @ dlogits
    grads["b_y"] = dlogits.sum(axis=0)
    return loss(probs, labels), grads


def clip_gradients(grads: dict, clip_norm: float) -> float:
    """Scale all gradients in place so their global L2 norm is at most ``clip_norm``."""
    norm = math.sqrt(sum(float(np.vdot(g, g)) for g in grads.values()))
    if norm > clip_norm:
        scale = clip_norm / norm
        for g in grads.values():
            g *= scale
    return norm


@dataclass
class RmspropState:
    accumulators: dict[str, np.ndarray]

    @classmethod
    def zeros_like(cls, params) -> "RmspropState":
        return cls({k: np.zeros_like(v) for k, v in params.items()})


def rmsprop_step(params, grads, state: RmspropState, lr: float, rho: float, epsilon: float) -> None:
    for name, g in grads.items():
        s = state.accumulators[name]
        s *= rho
        s += (1.0 - rho) * g * g
        params[name] -= lr * g / (np.sqrt(s) + epsilon)


def _take(inputs, idx, config):
    if config.input_mode == "single_step":
        return inputs[idx]
    ids, lengths = inputs
    return ids[idx], lengths[idx]


def _num_samples(inputs, config):
    return len(inputs) if config.input_mode == "single_step" else len(inputs[1])


@dataclass
class TrainResult:
    params: dict[str, np.ndarray]
    history: list[dict] = field(default_factory=list)


def evaluate_loss(params, config, inputs, labels, embeddings=None, chunk: int = 256) -> float:
    labels = np.asarray(labels, dtype=np.int64)
    total = 0.0
    for start in range(0, len(labels), chunk):
        idx = np.arange(start, min(start + chunk, len(labels)))
        probs = forward(params, config, _take(inputs, idx, config), embeddings)
        total += loss(probs, labels[idx]) * len(idx)
    return total / len(labels)


def train(config: RnnConfig, inputs, labels, embeddings=None, valid=None, params=None) -> TrainResult:
    """Minibatch RMSprop with global-norm clipping and per-epoch seeded shuffling.

    ``valid`` is an optional ``(inputs, labels)`` pair whose loss is recorded
    after each epoch.
    """
    labels = np.asarray(labels, dtype=np.int64)
    n = _num_samples(inputs, config)
    if n == 0:
        raise ValueError("training set is empty")
    rng = Rng(config.seed)
    params = params if params is not None else init_params(config, rng)
    state = RmspropState.zeros_like(params)
    history = []
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for batch_no, start in enumerate(range(0, n, config.batch_size), start=1):
            idx = order[start:start + config.batch_size]
            batch_loss, grads = backward(params, config, _take(inputs, idx, config), labels[idx], embeddings)
            if not math.isfinite(batch_loss):
                raise TrainingError(f"non-finite loss {batch_loss} at epoch {epoch}, batch {batch_no}")
            clip_gradients(grads, config.clip_norm)
            rmsprop_step(params, grads, state, config.lr, config.rho, config.epsilon)
            total += batch_loss * len(idx)
        record = {"epoch": epoch, "train_loss": total / n}
        if valid is not None:
            record["valid_loss"] = evaluate_loss(params, config, valid[0], valid[1], embeddings)
        history.append(record)
    return TrainResult(params, history)


def predict_proba(params, config: RnnConfig, inputs, embeddings=None, chunk: int = 256) -> np.ndarray:
    n = _num_samples(inputs, config)
    out = np.zeros((n, config.num_classes))
    for start in range(0, n, chunk):
        idx = np.arange(start, min(start + chunk, n))
        out[idx] = forward(params, config, _take(inputs, idx, config), embeddings)
    return out
