"""Linear SVM (Pegasos) and Naive Bayes (multinomial / gaussian) baselines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import Rng

VAR_FLOOR = 1e-9
# relative score gap below which two class scores count as tied
TIE_TOLERANCE = 1e-12


def _check_binary(labels) -> np.ndarray:
    y = np.asarray(labels, dtype=np.int64)
    if set(np.unique(y).tolist()) != {0, 1}:
        raise ValueError("training needs both classes 0 and 1 present (and nothing else)")
    return y


@dataclass
class LinearSvmModel:
    weights: np.ndarray
    bias: float
    lam: float = 1e-4
    epochs: int = 50
    seed: int = 0
    objective_history: list[float] = field(default_factory=list)

    def decision_function(self, X) -> np.ndarray:
        return np.atleast_2d(np.asarray(X, dtype=np.float64)) @ self.weights + self.bias

    def predict(self, X) -> np.ndarray:
        # margin 0 goes to the positive class
        return (self.decision_function(X) >= 0).astype(np.int64)


def svm_objective(weights, bias, lam, X, y_pm) -> float:
    margins = y_pm * (X @ weights + bias)
    return 0.5 * lam * float(weights @ weights) + float(np.maximum(0.0, 1.0 - margins).mean())


def train_svm(features, labels, lam: float = 1e-4, epochs: int = 50, seed: int = 0) -> LinearSvmModel:
    """Pegasos SGD on ``lam/2 |w|^2 + mean hinge``, step ``1/(lam t)``, unregularized bias."""
    X = np.asarray(features, dtype=np.float64)
    y = np.where(_check_binary(labels) == 1, 1.0, -1.0)
    n, dim = X.shape
    w = np.zeros(dim)
    b = 0.0
    rng = Rng(seed)
    history = []
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            violated = y[i] * (X[i] @ w + b) < 1.0
            w *= 1.0 - eta * lam
            if violated:
                w += eta * y[i] * X[i]
                b += eta * y[i]
        history.append(svm_objective(w, b, lam, X, y))
    return LinearSvmModel(w, float(b), lam, epochs, seed, history)


@dataclass
class NaiveBayesModel:
    variant: str
    class_log_priors: np.ndarray
    feature_log_probs: np.ndarray | None = None  # multinomial, (2, dim)
    means: np.ndarray | None = None  # gaussian, (2, dim)
    variances: np.ndarray | None = None
    alpha: float = 1.0

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self.variant == "multinomial":
            return X @ self.feature_log_probs.T + self.class_log_priors
        ll = -0.5 * np.log(2.0 * np.pi * self.variances).sum(axis=1)
        sq = ((X[:, None, :] - self.means[None, :, :]) ** 2 / self.variances[None, :, :]).sum(axis=2)
        return ll[None, :] - 0.5 * sq + self.class_log_priors

    def predict(self, X) -> np.ndarray:
        """Class 1 only when its score beats class 0 by more than rounding noise; ties go to class 0."""
        jll = self.joint_log_likelihood(X)
        scale = np.maximum(1.0, np.abs(jll).max(axis=1))
        return (jll[:, 1] - jll[:, 0] > TIE_TOLERANCE * scale).astype(np.int64)

    def predict_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)


def train_nb(features, labels, variant: str = "multinomial", alpha: float = 1.0) -> NaiveBayesModel:
    X = np.atleast_2d(np.asarray(features, dtype=np.float64))
    y = _check_binary(labels)
    counts = np.array([(y == c).sum() for c in (0, 1)], dtype=np.float64)
    log_priors = np.log(counts / counts.sum())
    if variant == "multinomial":
        negative = np.argwhere(X < 0)
        if len(negative):
            raise ValueError(f"multinomial naive Bayes needs nonnegative features; feature {negative[0][1]} is negative")
        totals = np.stack([X[y == c].sum(axis=0) for c in (0, 1)])
        smoothed = totals + alpha
        log_probs = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
        return NaiveBayesModel(variant, log_priors, feature_log_probs=log_probs, alpha=alpha)
    if variant == "gaussian":
        means = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
        variances = np.stack([X[y == c].var(axis=0) for c in (0, 1)])
        return NaiveBayesModel(variant, log_priors, means=means, variances=np.maximum(variances, VAR_FLOOR))
    raise ValueError(f"unknown naive Bayes variant {variant!r}")


def predict_nb(model: NaiveBayesModel, x) -> int:
    return int(model.predict(x)[0])

