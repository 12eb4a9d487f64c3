"""
Skip-gram embeddings
====================

Train word vectors on a two-topic corpus and check that words of the same
topic end up closer to each other than to words of the other topic.
"""

import numpy as np

from ideoclf import synthetic
from ideoclf.embedding import build_embed_vocab, cosine_similarity, encode_batch, mean_pool, train_word2vec
from ideoclf.preprocess import PreprocessConfig, preprocess_text

corpus = synthetic.make_corpus(n_docs=200, seed=3)
seqs = [preprocess_text(t, PreprocessConfig()) for t in corpus.texts]
vocab = build_embed_vocab(seqs, max_size=1000)
print("rows (PAD, OOV, words):", vocab.num_rows)

matrix = train_word2vec(seqs, vocab, dim=50, epochs=3, seed=0)

topic = {}
for seq, label in zip(seqs, corpus.labels):
    for tok in seq:
        topic[tok] = label
words = sorted(topic)
same, other = [], []
for i, a in enumerate(words):
    for b in words[i + 1:]:
        sim = cosine_similarity(matrix[vocab.lookup(a)], matrix[vocab.lookup(b)])
        (same if topic[a] == topic[b] else other).append(sim)
print(f"intra-topic {np.mean(same):.3f}  inter-topic {np.mean(other):.3f}")

# documents as padded index sequences, or as one mean-pooled vector each
ids, lengths = encode_batch(seqs[:4], vocab, length=100)
print(ids.shape, lengths)
print(mean_pool(ids, lengths, matrix).shape)
