"""
Three feature families
======================

Stylometric vectors describe writing style, TF-IDF vectors weight n-grams,
and word embeddings come from a skip-gram model trained on the corpus.
"""

import numpy as np

from ideoclf import synthetic
from ideoclf.preprocess import PreprocessConfig, preprocess_text
from ideoclf.stylometric import FEATURE_NAMES, extract_stylometric, fit_scaler
from ideoclf.tfidf import fit_vocab, transform_tfidf

config = PreprocessConfig()
corpus = synthetic.make_corpus(n_docs=60, seed=1)

###############################################################################
# Stylometry works on the raw text, so punctuation is visible
vec = extract_stylometric("ভালোওওও খবর! আবার? হ্যাঁ।", config)
for name, value in zip(FEATURE_NAMES, vec):
    print(f"{name:>22s} {value:.3f}")

raw = np.array([extract_stylometric(t, config) for t in corpus.texts])
scaler = fit_scaler(raw)
print("standardized column means ~0:", np.round(scaler.transform(raw).mean(axis=0), 12))

###############################################################################
# TF-IDF over unigrams and bigrams, L2-normalized
seqs = [preprocess_text(t, config) for t in corpus.texts]
vocab = fit_vocab(seqs, (1, 2), max_features=200)
print(len(vocab), "n-grams, first few:", list(vocab.entries)[:5])
sparse = transform_tfidf(vocab, seqs[0])
print("nonzeros:", len(sparse.indices), "norm:", np.linalg.norm(sparse.values))
