import numpy as np
import pytest

from ideoclf import synthetic
from ideoclf.embedding import (
    OOV,
    PAD,
    EmbeddingVocabulary,
    build_embed_vocab,
    cosine_similarity,
    encode_batch,
    encode_sequence,
    init_embeddings,
    mean_pool,
    sgns_gradients,
    sgns_objective,
    train_word2vec,
)
from ideoclf.preprocess import PreprocessConfig, preprocess_text
from ideoclf.rng import Rng


def test_vocab_ranking():
    vocab = build_embed_vocab([["a"] * 5 + ["b"] * 2], 1)
    assert vocab.index == {"a": 2}
    vocab = build_embed_vocab([["b", "a", "c"]], 10)
    assert vocab.index == {"a": 2, "b": 3, "c": 4}
    vocab = build_embed_vocab([["b"] * 3 + ["a"] * 3], 1)
    assert vocab.index == {"a": 2}
    with pytest.raises(ValueError):
        build_embed_vocab([])


def test_vocab_dict_round_trip():
    vocab = build_embed_vocab([["ক", "খ", "ক"]])
    assert EmbeddingVocabulary.from_dict(vocab.to_dict()) == vocab


def test_encode_sequence():
    vocab = build_embed_vocab([["ক"]])
    empty = encode_sequence([], vocab)
    assert empty.ids.tolist() == [0] * 100 and empty.true_length == 0
    one = encode_sequence(["ক"], vocab)
    assert one.ids.tolist() == [2] + [0] * 99 and one.true_length == 1
    long = encode_sequence(["ক", "x"] * 75, vocab)
    assert long.true_length == 100 and long.ids.tolist() == [2, OOV] * 50


def test_encode_never_exceeds_vocab():
    seqs = [[f"w{i % 17}" for i in range(k, k + 30)] for k in range(20)]
    vocab = build_embed_vocab(seqs, 5)
    ids, lengths = encode_batch(seqs + [["zzz"] * 3], vocab, 25)
    assert ids.max() < len(vocab) + 2 and ids.min() >= 0
    assert lengths.tolist()[-1] == 3


def test_sgns_gradient_matches_finite_differences():
    rng = Rng(11)
    h = 1e-5
    for trial in range(25):
        dim = 6
        v = rng.uniform(-1, 1, dim)
        u_o = rng.uniform(-1, 1, dim)
        u_n = rng.uniform(-1, 1, (5, dim))
        obj, d_v, d_o, d_n = sgns_gradients(v, u_o, u_n)
        assert obj == pytest.approx(sgns_objective(v, u_o, u_n), rel=1e-14)
        for arr, grad in ((v, d_v), (u_o, d_o), (u_n, d_n)):
            for idx in np.ndindex(arr.shape):
                old = arr[idx]
                arr[idx] = old + h
                plus = sgns_objective(v, u_o, u_n)
                arr[idx] = old - h
                minus = sgns_objective(v, u_o, u_n)
                arr[idx] = old
                numeric = (plus - minus) / (2 * h)
                assert abs(grad[idx] - numeric) <= 1e-4 * max(abs(grad[idx]), abs(numeric)) + 1e-10


def _corpus_seqs(n_docs=80):
    corpus = synthetic.make_corpus(n_docs=n_docs, max_tokens=20, seed=4)
    cfg = PreprocessConfig()
    return [preprocess_text(t, cfg) for t in corpus.texts], corpus


def test_zero_epochs_returns_initialization():
    seqs, _ = _corpus_seqs(10)
    vocab = build_embed_vocab(seqs)
    matrix = train_word2vec(seqs, vocab, dim=8, epochs=0, seed=3)
    np.testing.assert_array_equal(matrix, init_embeddings(vocab.num_rows, 8, Rng(3)))
    assert np.all(np.abs(matrix[1:]) <= 0.5 / 8)


def test_training_is_deterministic_and_keeps_pad_zero():
    seqs, _ = _corpus_seqs(30)
    vocab = build_embed_vocab(seqs)
    m1 = train_word2vec(seqs, vocab, dim=10, epochs=2, seed=5)
    m2 = train_word2vec(seqs, vocab, dim=10, epochs=2, seed=5)
    assert m1.tobytes() == m2.tobytes()
    assert np.all(m1[PAD] == 0)
    init = init_embeddings(vocab.num_rows, 10, Rng(5))
    np.testing.assert_array_equal(m1[OOV], init[OOV])
    assert not np.array_equal(m1[2:], init[2:])


def test_empty_vocab_error():
    with pytest.raises(ValueError):
        train_word2vec([[]], EmbeddingVocabulary({}, ()), dim=4)


def test_topic_clusters_form():
    seqs, corpus = _corpus_seqs(200)
    vocab = build_embed_vocab(seqs)
    matrix = train_word2vec(seqs, vocab, dim=20, epochs=5, seed=1)
    topic = {}
    for seq, label in zip(seqs, corpus.labels):
        for tok in seq:
            topic[vocab.index[tok]] = label
    intra, inter = [], []
    rows = sorted(topic)
    for a in rows:
        for b in rows:
            if a < b:
                (intra if topic[a] == topic[b] else inter).append(cosine_similarity(matrix[a], matrix[b]))
    assert np.mean(intra) > np.mean(inter)


def test_cosine():
    x = np.array([1.0, 2.0, -3.0])
    assert cosine_similarity(x, x) == pytest.approx(1.0)
    assert cosine_similarity(x, -x) == pytest.approx(-1.0)
    assert cosine_similarity(np.array([1.0, 0]), np.array([0, 1.0])) == 0.0
    with pytest.raises(ValueError):
        cosine_similarity(x, np.zeros(3))


def test_mean_pool_skips_pad_and_oov():
    matrix = np.arange(12, dtype=float).reshape(4, 3)
    ids = np.array([[2, 3, 1, 0], [1, 0, 0, 0]])
    pooled = mean_pool(ids, np.array([3, 1]), matrix)
    np.testing.assert_allclose(pooled[0], (matrix[2] + matrix[3]) / 2)
    np.testing.assert_array_equal(pooled[1], 0)
