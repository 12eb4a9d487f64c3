"""Word n-gram TF-IDF vectorizer with a frequency-capped vocabulary."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

DEFAULT_NGRAM_RANGE = (1, 2)
DEFAULT_MAX_FEATURES = 1000


def ngrams(tokens, ngram_range=DEFAULT_NGRAM_RANGE) -> list[str]:
    """Contiguous token windows of every size in ``ngram_range``, space-joined."""
    lo, hi = ngram_range
    tokens = list(tokens)
    out = []
    for n in range(lo, hi + 1):
        out.extend(" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1))
    return out


@dataclass(frozen=True)
class NgramVocabulary:
    entries: dict[str, int]
    doc_freq: tuple[int, ...]
    num_docs_fitted: int
    ngram_range: tuple[int, int] = DEFAULT_NGRAM_RANGE
    max_features: int = DEFAULT_MAX_FEATURES

    def __len__(self):
        return len(self.entries)

    def idf(self) -> np.ndarray:
        df = np.asarray(self.doc_freq, dtype=np.float64)
        return np.log((1.0 + self.num_docs_fitted) / (1.0 + df)) + 1.0

    def to_dict(self) -> dict:
        return {
            "ngram_range": list(self.ngram_range),
            "max_features": self.max_features,
            "num_docs_fitted": self.num_docs_fitted,
            "entries": [[gram, idx, self.doc_freq[idx]] for gram, idx in self.entries.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NgramVocabulary":
        triples = data["entries"]
        entries = {gram: idx for gram, idx, _ in triples}
        df = [0] * len(triples)
        for _, idx, d in triples:
            df[idx] = d
        return cls(entries, tuple(df), data["num_docs_fitted"], tuple(data["ngram_range"]), data["max_features"])


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray
    values: np.ndarray
    dim: int

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out


def fit_vocab(token_seqs, ngram_range=DEFAULT_NGRAM_RANGE, max_features: int = DEFAULT_MAX_FEATURES) -> NgramVocabulary:
    """Keep the ``max_features`` most frequent n-grams (ties: lexicographic), index them lexicographically."""
    token_seqs = list(token_seqs)
    if not token_seqs:
        raise ValueError("cannot fit a vocabulary on an empty corpus")
    lo, hi = ngram_range
    if not 1 <= lo <= hi:
        raise ValueError(f"invalid ngram_range {ngram_range}")
    totals: Counter[str] = Counter()
    df: Counter[str] = Counter()
    for seq in token_seqs:
        grams = ngrams(seq, ngram_range)
        totals.update(grams)
        df.update(set(grams))
    if not totals:
        raise ValueError("every document is empty; no n-grams to fit")
    ranked = sorted(totals, key=lambda g: (-totals[g], g))[:max_features]
    kept = sorted(ranked)
    entries = {gram: i for i, gram in enumerate(kept)}
    return NgramVocabulary(entries, tuple(df[g] for g in kept), len(token_seqs), (lo, hi), max_features)


def transform_tfidf(vocab: NgramVocabulary, seq) -> SparseVector:
    """Raw-count tf times smoothed idf ``ln((1+N)/(1+df)) + 1``, L2-normalized."""
    counts = Counter(g for g in ngrams(seq, vocab.ngram_range) if g in vocab.entries)
    dim = len(vocab)
    if not counts:
        return SparseVector(np.zeros(0, dtype=np.int64), np.zeros(0), dim)
    idx = np.array(sorted(vocab.entries[g] for g in counts), dtype=np.int64)
    inverse = {vocab.entries[g]: c for g, c in counts.items()}
    tf = np.array([inverse[i] for i in idx], dtype=np.float64)
    df = np.array([vocab.doc_freq[i] for i in idx], dtype=np.float64)
    weights = tf * (np.log((1.0 + vocab.num_docs_fitted) / (1.0 + df)) + 1.0)
    return SparseVector(idx, weights / math.sqrt(float(weights @ weights)), dim)
