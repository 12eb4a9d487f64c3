"""Skip-gram negative-sampling word vectors and fixed-length index sequences.

Index 0 is padding and index 1 stands for every out-of-vocabulary token;
vocabulary words occupy indices 2 .. K+1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .rng import Rng

PAD = 0
OOV = 1
DEFAULT_VOCAB_SIZE = 1000
DEFAULT_DIM = 100
DEFAULT_SEQ_LEN = 100


@dataclass(frozen=True)
class EmbeddingVocabulary:
    index: dict[str, int]
    counts: tuple[int, ...]  # corpus frequency of the word at index 2 + i
    max_size: int = DEFAULT_VOCAB_SIZE

    def __len__(self):
        return len(self.index)

    @property
    def num_rows(self) -> int:
        return len(self.index) + 2

    def lookup(self, token: str) -> int:
        return self.index.get(token, OOV)

    def to_dict(self) -> dict:
        words = sorted(self.index, key=self.index.__getitem__)
        return {
            "max_size": self.max_size,
            "entries": [[w, self.index[w], self.counts[self.index[w] - 2]] for w in words],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EmbeddingVocabulary":
        entries = sorted(data["entries"], key=lambda e: e[1])
        return cls({w: i for w, i, _ in entries}, tuple(c for _, _, c in entries), data["max_size"])


@dataclass(frozen=True)
class IndexSequence:
    ids: np.ndarray
    true_length: int


def build_embed_vocab(token_seqs, max_size: int = DEFAULT_VOCAB_SIZE) -> EmbeddingVocabulary:
    token_seqs = list(token_seqs)
    if not token_seqs:
        raise ValueError("cannot build an embedding vocabulary from an empty corpus")
    counts = Counter(t for seq in token_seqs for t in seq)
    top = sorted(counts, key=lambda w: (-counts[w], w))[:max_size]
    return EmbeddingVocabulary({w: i + 2 for i, w in enumerate(top)}, tuple(counts[w] for w in top), max_size)


def encode_sequence(seq, vocab: EmbeddingVocabulary, length: int = DEFAULT_SEQ_LEN) -> IndexSequence:
    """First ``length`` tokens as vocabulary indices, zero-padded on the right."""
    tokens = list(seq)[:length]
    ids = np.zeros(length, dtype=np.int64)
    ids[: len(tokens)] = [vocab.lookup(t) for t in tokens]
    return IndexSequence(ids, len(tokens))


def encode_batch(seqs, vocab: EmbeddingVocabulary, length: int = DEFAULT_SEQ_LEN) -> tuple[np.ndarray, np.ndarray]:
    encoded = [encode_sequence(s, vocab, length) for s in seqs]
    ids = np.stack([e.ids for e in encoded]) if encoded else np.zeros((0, length), dtype=np.int64)
    return ids, np.array([e.true_length for e in encoded], dtype=np.int64)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def sgns_objective(v_center: np.ndarray, u_context: np.ndarray, u_negatives: np.ndarray) -> float:
    """``log s(u_o . v_c) + sum_k log s(-u_k . v_c)`` for one (center, context, negatives) triple."""
    pos = float(u_context @ v_center)
    neg = u_negatives @ v_center
    return float(-np.logaddexp(0.0, -pos) - np.logaddexp(0.0, neg).sum())


def sgns_gradients(v_center, u_context, u_negatives):
    """Objective and its gradients w.r.t. the center vector, context vector and each negative."""
    pos = float(u_context @ v_center)
    neg = u_negatives @ v_center
    g_pos = 1.0 - _sigmoid(pos)
    g_neg = _sigmoid(neg)
    objective = float(-np.logaddexp(0.0, -pos) - np.logaddexp(0.0, neg).sum())
    d_center = g_pos * u_context - g_neg @ u_negatives
    d_context = g_pos * v_center
    d_negatives = -g_neg[:, None] * v_center[None, :]
    return objective, d_center, d_context, d_negatives


def init_embeddings(num_rows: int, dim: int, rng: Rng) -> np.ndarray:
    matrix = rng.uniform(-0.5 / dim, 0.5 / dim, (num_rows, dim))
    matrix[PAD] = 0.0
    return matrix


def noise_distribution(vocab: EmbeddingVocabulary, power: float = 0.75) -> np.ndarray:
    """Cumulative unigram**power table over word indices 2.. (never PAD or OOV)."""
    weights = np.asarray(vocab.counts, dtype=np.float64) ** power
    return np.cumsum(weights / weights.sum())


def train_word2vec(
    token_seqs,
    vocab: EmbeddingVocabulary,
    dim: int = DEFAULT_DIM,
    window: int = 5,
    negatives: int = 5,
    epochs: int = 5,
    lr0: float = 0.025,
    seed: int = 0,
) -> np.ndarray:
    """Train input vectors by per-pair SGD ascent on the SGNS objective.

    The learning rate decays linearly from ``lr0`` to ``lr0 / 100`` over all
    center-word positions of all epochs. Out-of-vocabulary tokens keep their
    positions in the text but are neither centers nor contexts.
    Returns the ``(K + 2, dim)`` input matrix; row 0 is zero, row 1 keeps its
    initial random values.
    """
    if len(vocab) == 0:
        raise ValueError("embedding vocabulary is empty")
    rng = Rng(seed)
    v = init_embeddings(vocab.num_rows, dim, rng)
    u = np.zeros_like(v)
    cdf = noise_distribution(vocab)
    sentences = [np.array([vocab.lookup(t) for t in seq], dtype=np.int64) for seq in token_seqs]
    sentences = [s for s in sentences if len(s)]
    total_steps = epochs * sum(len(s) for s in sentences)
    lr_min = lr0 / 100.0
    step = 0
    for _ in range(epochs):
        for sent in sentences:
            n = len(sent)
            for pos in range(n):
                lr = lr0 - (lr0 - lr_min) * (step / total_steps)
                step += 1
                center = sent[pos]
                if center == OOV:
                    continue
                lo, hi = max(0, pos - window), min(n, pos + window + 1)
                contexts = [sent[j] for j in range(lo, hi) if j != pos and sent[j] != OOV]
                if not contexts:
                    continue
                draws = np.searchsorted(cdf, rng.random(len(contexts) * negatives), side="right")
                draws = np.minimum(draws, len(cdf) - 1).reshape(len(contexts), negatives) + 2
                for ctx, negs in zip(contexts, draws):
                    _, d_c, d_o, d_n = sgns_gradients(v[center], u[ctx], u[negs])
                    u[ctx] += lr * d_o
                    np.add.at(u, negs, lr * d_n)
                    v[center] += lr * d_c
    v[PAD] = 0.0
    return v


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


def mean_pool(ids: np.ndarray, lengths: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Mean of in-vocabulary word vectors per row; zero where a row has none."""
    out = np.zeros((ids.shape[0], matrix.shape[1]))
    for row, (seq, length) in enumerate(zip(ids, lengths)):
        words = seq[:length]
        words = words[words >= 2]
        if len(words):
            out[row] = matrix[words].mean(axis=0)
    return out
