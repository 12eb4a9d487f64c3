"""Political-ideology text classification: Bangla preprocessing, stylometric,
TF-IDF and word2vec features, and SVM / Naive Bayes / LSTM / GRU classifiers."""

from .corpus import Corpus, Document, Split, class_distribution, load_corpus, stratified_split
from .evaluate import MetricsReport, run_grid, score
from .pipeline import FEATURES, MODELS, Hyperparams, Pipeline
from .preprocess import PreprocessConfig, preprocess_document

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Document",
    "FEATURES",
    "Hyperparams",
    "MODELS",
    "MetricsReport",
    "Pipeline",
    "PreprocessConfig",
    "Split",
    "class_distribution",
    "load_corpus",
    "preprocess_document",
    "run_grid",
    "score",
    "stratified_split",
]
