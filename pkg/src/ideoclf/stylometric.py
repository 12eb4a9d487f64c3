"""Twelve-component writing-style vectors and their z-score scaler.

Features are computed on the raw text, so punctuation and digits that the
model-input path strips away are still visible here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .preprocess import PreprocessConfig, filter_script, tokenize

FEATURE_NAMES = (
    "char_count",
    "token_count",
    "mean_token_length",
    "sentence_count",
    "mean_sentence_length",
    "exclamation_count",
    "question_count",
    "danda_count",
    "elongated_token_count",
    "type_token_ratio",
    "digit_ratio",
    "stopword_ratio",
)
NUM_FEATURES = len(FEATURE_NAMES)

_SENTENCE_END = re.compile(r"[।!?.]")
_ELONGATION = re.compile(r"(.)\1\1", re.DOTALL)


def is_elongated(token: str) -> bool:
    """True when the token holds a run of at least three identical codepoints."""
    return _ELONGATION.search(token) is not None


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def extract_stylometric(text: str, config: PreprocessConfig) -> np.ndarray:
    raw_tokens = text.split()
    sentences = [s.split() for s in _SENTENCE_END.split(text)]
    sentences = [s for s in sentences if s]
    script_tokens = tokenize(filter_script(text, config))
    kept = [t for t in script_tokens if t not in config.stopwords]
    n_chars = len(text)
    return np.array(
        [
            n_chars,
            len(raw_tokens),
            _ratio(sum(len(t) for t in raw_tokens), len(raw_tokens)),
            len(sentences),
            _ratio(sum(len(s) for s in sentences), len(sentences)),
            text.count("!"),
            text.count("?"),
            text.count("।"),
            sum(is_elongated(t) for t in raw_tokens),
            _ratio(len(set(kept)), len(kept)),
            _ratio(sum(ch.isdigit() for ch in text), n_chars),
            _ratio(len(script_tokens) - len(kept), len(script_tokens)),
        ],
        dtype=np.float64,
    )


@dataclass(frozen=True)
class StandardScaler:
    means: np.ndarray
    stds: np.ndarray

    def transform(self, x: np.ndarray) -> np.ndarray:
        """``(x - mean) / std`` per component; zero-std components are only centered."""
        x = np.asarray(x, dtype=np.float64)
        safe = np.where(self.stds > 0, self.stds, 1.0)
        return (x - self.means) / safe


def fit_scaler(vectors) -> StandardScaler:
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("fit_scaler needs a non-empty list of vectors")
    stds = X.std(axis=0)
    # constant columns must be exactly 0, not rounding noise
    stds[np.ptp(X, axis=0) == 0] = 0.0
    return StandardScaler(X.mean(axis=0), stds)


def transform(scaler: StandardScaler | None, v: np.ndarray) -> np.ndarray:
    if scaler is None:
        raise ValueError("scaler is not fitted")
    return scaler.transform(v)
