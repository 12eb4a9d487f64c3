"""Feature extractor + classifier pairs that train on texts and predict labels.

Every extractor is fitted on training texts only. The three feature kinds
feed the models as follows:

============  ==============================  ================================
feature       svm / nb input                  lstm / gru input
============  ==============================  ================================
stylometric   z-scored 12-vector (gaussian)   z-scored 12-vector, one step
tfidf         dense tf-idf row (multinomial)  dense tf-idf row, one step
embedding     mean word vector (gaussian)     frozen-embedding index sequence
============  ==============================  ================================
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from . import classical, embedding, neural, stylometric, tfidf
from .preprocess import PreprocessConfig, preprocess_text
from .rng import derive_seed

FEATURES = ("stylometric", "tfidf", "embedding")
MODELS = ("svm", "nb", "lstm", "gru")


@dataclass(frozen=True)
class Hyperparams:
    max_features: int = tfidf.DEFAULT_MAX_FEATURES
    ngram_min: int = 1
    ngram_max: int = 2
    embed_vocab: int = embedding.DEFAULT_VOCAB_SIZE
    embed_dim: int = embedding.DEFAULT_DIM
    seq_len: int = embedding.DEFAULT_SEQ_LEN
    w2v_window: int = 5
    w2v_negatives: int = 5
    w2v_epochs: int = 5
    w2v_lr: float = 0.025
    hidden_units: int = 300
    lr: float = 1e-3
    rho: float = 0.9
    epsilon: float = 1e-7
    batch_size: int = 32
    epochs: int = 10
    clip_norm: float = 5.0
    svm_lambda: float = 1e-4
    svm_epochs: int = 50
    nb_alpha: float = 1.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Hyperparams":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


class StylometricExtractor:
    kind = "stylometric"

    def __init__(self, scaler: stylometric.StandardScaler | None = None):
        self.scaler = scaler

    def fit(self, texts, preprocess: PreprocessConfig, hp: Hyperparams, seed: int):
        self.scaler = stylometric.fit_scaler([stylometric.extract_stylometric(t, preprocess) for t in texts])
        return self

    def dense(self, texts, preprocess: PreprocessConfig) -> np.ndarray:
        raw = np.array([stylometric.extract_stylometric(t, preprocess) for t in texts]).reshape(-1, stylometric.NUM_FEATURES)
        return stylometric.transform(self.scaler, raw)

    @property
    def dim(self) -> int:
        return stylometric.NUM_FEATURES

    def to_dict(self) -> dict:
        return {"means": self.scaler.means, "stds": self.scaler.stds}

    @classmethod
    def from_dict(cls, data: dict) -> "StylometricExtractor":
        return cls(stylometric.StandardScaler(np.asarray(data["means"]), np.asarray(data["stds"])))


class TfidfExtractor:
    kind = "tfidf"

    def __init__(self, vocab: tfidf.NgramVocabulary | None = None):
        self.vocab = vocab

    def fit(self, texts, preprocess, hp: Hyperparams, seed: int):
        seqs = [preprocess_text(t, preprocess) for t in texts]
        self.vocab = tfidf.fit_vocab(seqs, (hp.ngram_min, hp.ngram_max), hp.max_features)
        return self

    def dense(self, texts, preprocess) -> np.ndarray:
        out = np.zeros((len(texts), len(self.vocab)))
        for row, text in enumerate(texts):
            vec = tfidf.transform_tfidf(self.vocab, preprocess_text(text, preprocess))
            out[row, vec.indices] = vec.values
        return out

    @property
    def dim(self) -> int:
        return len(self.vocab)

    def to_dict(self) -> dict:
        return self.vocab.to_dict()

    @classmethod
    def from_dict(cls, data: dict) -> "TfidfExtractor":
        return cls(tfidf.NgramVocabulary.from_dict(data))


class EmbeddingExtractor:
    kind = "embedding"

    def __init__(self, vocab=None, matrix=None, seq_len: int = embedding.DEFAULT_SEQ_LEN):
        self.vocab = vocab
        self.matrix = matrix
        self.seq_len = seq_len

    def fit(self, texts, preprocess, hp: Hyperparams, seed: int):
        seqs = [preprocess_text(t, preprocess) for t in texts]
        self.vocab = embedding.build_embed_vocab(seqs, hp.embed_vocab)
        self.seq_len = hp.seq_len
        self.matrix = embedding.train_word2vec(
            seqs,
            self.vocab,
            dim=hp.embed_dim,
            window=hp.w2v_window,
            negatives=hp.w2v_negatives,
            epochs=hp.w2v_epochs,
            lr0=hp.w2v_lr,
            seed=derive_seed(seed, "word2vec"),
        )
        return self

    def sequences(self, texts, preprocess):
        return embedding.encode_batch([preprocess_text(t, preprocess) for t in texts], self.vocab, self.seq_len)

    def dense(self, texts, preprocess) -> np.ndarray:
        ids, lengths = self.sequences(texts, preprocess)
        return embedding.mean_pool(ids, lengths, self.matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def to_dict(self) -> dict:
        return {"seq_len": self.seq_len, "vocab": self.vocab.to_dict(), "matrix": self.matrix}

    @classmethod
    def from_dict(cls, data: dict) -> "EmbeddingExtractor":
        return cls(embedding.EmbeddingVocabulary.from_dict(data["vocab"]), np.asarray(data["matrix"]), data["seq_len"])


EXTRACTORS = {cls.kind: cls for cls in (StylometricExtractor, TfidfExtractor, EmbeddingExtractor)}


def make_extractor(feature: str):
    if feature not in EXTRACTORS:
        raise ValueError(f"unknown feature {feature!r}; expected one of {FEATURES}")
    return EXTRACTORS[feature]()


class Pipeline:
    """One (feature, model) cell of the comparison grid."""

    def __init__(self, feature: str, model: str, preprocess: PreprocessConfig | None = None,
                 hparams: Hyperparams | None = None, seed: int = 0):
        if feature not in FEATURES:
            raise ValueError(f"unknown feature {feature!r}; expected one of {FEATURES}")
        if model not in MODELS:
            raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
        self.feature = feature
        self.model_kind = model
        self.preprocess = preprocess or PreprocessConfig()
        self.hparams = hparams or Hyperparams()
        self.seed = int(seed)
        self.extractor = None
        self.model = None
        self.rnn_config: neural.RnnConfig | None = None
        self.history: list[dict] = []

    @property
    def nb_variant(self) -> str:
        return "multinomial" if self.feature == "tfidf" else "gaussian"

    def fit(self, texts, labels, extractor=None) -> "Pipeline":
        """Fit the extractor (unless a pre-fitted one is given) and train the model."""
        texts = list(texts)
        labels = np.asarray(labels, dtype=np.int64)
        hp = self.hparams
        self.extractor = extractor or make_extractor(self.feature).fit(texts, self.preprocess, hp, self.seed)
        if self.model_kind in ("svm", "nb"):
            X = self.extractor.dense(texts, self.preprocess)
            if self.model_kind == "svm":
                self.model = classical.train_svm(X, labels, hp.svm_lambda, hp.svm_epochs, derive_seed(self.seed, "svm"))
            else:
                self.model = classical.train_nb(X, labels, self.nb_variant, hp.nb_alpha)
            return self
        sequence = self.feature == "embedding"
        self.rnn_config = neural.RnnConfig(
            cell=self.model_kind,
            input_mode="sequence" if sequence else "single_step",
            input_dim=self.extractor.dim,
            hidden_units=hp.hidden_units,
            lr=hp.lr,
            rho=hp.rho,
            epsilon=hp.epsilon,
            batch_size=hp.batch_size,
            epochs=hp.epochs,
            clip_norm=hp.clip_norm,
            seed=derive_seed(self.seed, "rnn"),
        )
        result = neural.train(self.rnn_config, self._rnn_inputs(texts), labels, self._embeddings())
        self.model = result.params
        self.history = result.history
        return self

    def _embeddings(self):
        return self.extractor.matrix if self.feature == "embedding" else None

    def _rnn_inputs(self, texts):
        if self.feature == "embedding":
            return self.extractor.sequences(texts, self.preprocess)
        return self.extractor.dense(texts, self.preprocess)

    def predict_with_scores(self, texts) -> tuple[np.ndarray, np.ndarray]:
        """Labels plus a per-sample score.

        The score is the winning class probability for RNN and NB models and
        the signed margin ``w.x + b`` for the SVM.
        """
        texts = list(texts)
        if self.model is None:
            raise ValueError("pipeline is not fitted")
        if self.model_kind == "svm":
            margin = self.model.decision_function(self.extractor.dense(texts, self.preprocess))
            return (margin >= 0).astype(np.int64), margin
        if self.model_kind == "nb":
            X = self.extractor.dense(texts, self.preprocess)
            probs = self.model.predict_proba(X)
            labels = self.model.predict(X)
        else:
            probs = neural.predict_proba(self.model, self.rnn_config, self._rnn_inputs(texts), self._embeddings())
            labels = np.argmax(probs, axis=1).astype(np.int64)
        return labels, probs[np.arange(len(labels)), labels]

    def predict(self, texts) -> np.ndarray:
        return self.predict_with_scores(texts)[0]

    def model_params(self) -> dict:
        if self.model_kind == "svm":
            return {"weights": self.model.weights, "bias": self.model.bias}
        if self.model_kind == "nb":
            if self.model.variant == "multinomial":
                return {"variant": "multinomial", "alpha": self.model.alpha,
                        "class_log_priors": self.model.class_log_priors,
                        "feature_log_probs": self.model.feature_log_probs}
            return {"variant": "gaussian", "class_log_priors": self.model.class_log_priors,
                    "means": self.model.means, "variances": self.model.variances}
        return {"config": self.rnn_config.to_dict(),
                "params": {k: self.model[k] for k in neural.param_names(self.rnn_config)}}

    def load_model_params(self, data: dict) -> None:
        hp = self.hparams
        if self.model_kind == "svm":
            self.model = classical.LinearSvmModel(np.asarray(data["weights"], dtype=np.float64), float(data["bias"]),
                                                  hp.svm_lambda, hp.svm_epochs, derive_seed(self.seed, "svm"))
        elif self.model_kind == "nb":
            arrays = {k: np.asarray(v, dtype=np.float64) for k, v in data.items() if k not in ("variant", "alpha")}
            self.model = classical.NaiveBayesModel(data["variant"], alpha=data.get("alpha", hp.nb_alpha), **arrays)
        else:
            self.rnn_config = neural.RnnConfig(**data["config"])
            self.model = {k: np.asarray(v, dtype=np.float64) for k, v in data["params"].items()}

