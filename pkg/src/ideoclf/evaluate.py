"""Classification metrics and the feature x model comparison grid."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus, Split
from .pipeline import FEATURES, MODELS, Hyperparams, Pipeline, make_extractor
from .preprocess import PreprocessConfig

log = logging.getLogger(__name__)

# Values published for the original 1980-post Bangla dataset; shown for reference only.
REFERENCE_RESULTS = {
    ("embedding", "lstm"): {"accuracy": 0.8828, "f1": 0.8541},
    ("tfidf", "gru"): {"accuracy": 0.6994},
}


def confusion_matrix(y_true, y_pred, num_classes: int = 2) -> np.ndarray:
    """Counts indexed ``[true][predicted]``."""
    counts = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(counts, (np.asarray(y_true, dtype=np.int64), np.asarray(y_pred, dtype=np.int64)), 1)
    return counts


def _div(num: float, den: float) -> float:
    return num / den if den else 0.0


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: tuple[float, float]
    recall: tuple[float, float]
    f1: tuple[float, float]
    macro_f1: float
    weighted_f1: float
    n_samples: int
    confusion: tuple[tuple[int, int], tuple[int, int]]

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": list(self.precision),
            "recall": list(self.recall),
            "f1": list(self.f1),
            "macro_f1": self.macro_f1,
            "weighted_f1": self.weighted_f1,
            "n_samples": self.n_samples,
            "confusion": [list(r) for r in self.confusion],
        }


def score(y_true, y_pred) -> MetricsReport:
    """Accuracy plus per-class, macro and support-weighted precision/recall/F1.

    A precision or recall whose denominator is zero is reported as 0.
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} true labels vs {len(y_pred)} predictions")
    if len(y_true) == 0:
        raise ValueError("cannot score an empty prediction set")
    if np.any((y_true < 0) | (y_true > 1) | (y_pred < 0) | (y_pred > 1)):
        raise ValueError("labels must be 0 or 1")
    cm = confusion_matrix(y_true, y_pred)
    n = len(y_true)
    precision, recall, f1 = [], [], []
    for c in (0, 1):
        tp = int(cm[c, c])
        p = _div(tp, int(cm[:, c].sum()))
        r = _div(tp, int(cm[c, :].sum()))
        precision.append(p)
        recall.append(r)
        f1.append(_div(2 * p * r, p + r))
    support = cm.sum(axis=1)
    return MetricsReport(
        accuracy=int(np.trace(cm)) / n,
        precision=tuple(precision),
        recall=tuple(recall),
        f1=tuple(f1),
        macro_f1=(f1[0] + f1[1]) / 2,
        weighted_f1=float(support[0] * f1[0] + support[1] * f1[1]) / n,
        n_samples=n,
        confusion=tuple(tuple(int(v) for v in row) for row in cm),
    )


@dataclass
class GridCell:
    feature: str
    model: str
    report: MetricsReport | None = None
    error: str | None = None
    history: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.report is not None


@dataclass
class GridResult:
    cells: dict[tuple[str, str], GridCell]
    extractor_states: dict[str, dict] = field(default_factory=dict)

    def best(self) -> GridCell | None:
        done = [c for c in self.cells.values() if c.ok]
        if not done:
            return None
        return max(done, key=lambda c: (c.report.accuracy, c.report.macro_f1))


def run_grid(
    corpus: Corpus,
    split: Split,
    preprocess: PreprocessConfig | None = None,
    hparams: Hyperparams | None = None,
    seed: int = 0,
    features=FEATURES,
    models=MODELS,
) -> GridResult:
    """Train and test every (feature, model) cell on the same split.

    Each extractor is fitted once on the training documents and shared by the
    four models of its row. A failing cell is recorded with its error and the
    rest of the grid still runs.
    """
    preprocess = preprocess or PreprocessConfig()
    hparams = hparams or Hyperparams()
    train_docs = corpus.subset(split.train_indices)
    test_docs = corpus.subset(split.test_indices)
    train_x, train_y = [d.text for d in train_docs], [d.label for d in train_docs]
    test_x, test_y = [d.text for d in test_docs], [d.label for d in test_docs]
    cells = {}
    states = {}
    for feature in features:
        try:
            extractor = make_extractor(feature).fit(train_x, preprocess, hparams, seed)
            states[feature] = extractor.to_dict()
        except Exception as exc:  # noqa: BLE001 - recorded per cell
            log.warning("feature %s failed: %s", feature, exc)
            for model in models:
                cells[feature, model] = GridCell(feature, model, error=f"{type(exc).__name__}: {exc}")
            continue
        for model in models:
            log.info("training %s + %s", feature, model)
            try:
                pipe = Pipeline(feature, model, preprocess, hparams, seed).fit(train_x, train_y, extractor=extractor)
                cells[feature, model] = GridCell(feature, model, score(test_y, pipe.predict(test_x)), history=pipe.history)
            except Exception as exc:  # noqa: BLE001 - recorded per cell
                log.warning("cell %s + %s failed: %s", feature, model, exc)
                cells[feature, model] = GridCell(feature, model, error=f"{type(exc).__name__}: {exc}")
    return GridResult(cells, states)
