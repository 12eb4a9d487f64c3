"""Labeled text datasets: loading, writing, stratified splitting, class counts."""

from __future__ import annotations

import csv
import hashlib
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .rng import Rng

DEFAULT_TEST_FRACTION = 0.2


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: int


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    class_names: tuple[str, ...]
    source_path: str = ""

    def __post_init__(self):
        if not self.class_names:
            raise CorpusError("class_names must be non-empty")
        for doc in self.documents:
            if not 0 <= doc.label < len(self.class_names):
                raise CorpusError(f"document {doc.id!r} has label {doc.label} outside class_names")

    def __len__(self):
        return len(self.documents)

    @property
    def texts(self) -> list[str]:
        return [d.text for d in self.documents]

    @property
    def labels(self) -> list[int]:
        return [d.label for d in self.documents]

    def subset(self, indices) -> list[Document]:
        return [self.documents[i] for i in indices]

    def fingerprint(self) -> str:
        """SHA-256 over class names and (text, label) pairs in file order."""
        h = hashlib.sha256()
        for name in self.class_names:
            h.update(name.encode("utf-8") + b"\x00")
        h.update(b"\x01")
        for doc in self.documents:
            h.update(doc.text.encode("utf-8") + b"\x00" + str(doc.label).encode() + b"\x00")
        return h.hexdigest()


@dataclass(frozen=True)
class Split:
    train_indices: tuple[int, ...]
    test_indices: tuple[int, ...]
    seed: int
    test_fraction: float = field(default=DEFAULT_TEST_FRACTION)


def _infer_format(path: Path) -> str:
    return "tsv" if path.suffix.lower() in (".tsv", ".tab") else "csv"


def load_corpus(path, format: str | None = None) -> Corpus:
    """Read a ``text,label`` CSV/TSV file.

    Labels are mapped to indices by sorted label string, and document ids are
    ``row-<k>`` with ``k`` the 0-based data-row number.
    """
    path = Path(path)
    fmt = format or _infer_format(path)
    if fmt not in ("csv", "tsv"):
        raise CorpusError(f"unsupported corpus format {fmt!r}")
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
    try:
        content = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"{path}: not valid UTF-8 (byte {exc.start})") from exc

    reader = csv.reader(io.StringIO(content, newline=""), delimiter="\t" if fmt == "tsv" else ",", strict=True)
    rows: list[tuple[str, str]] = []
    try:
        header = next(reader, None)
        if header is None:
            raise CorpusError(f"{path}: empty file, expected a header with 'text' and 'label'")
        header = [h.strip() for h in header]
        for column in ("text", "label"):
            if column not in header:
                raise CorpusError(f"{path}: missing required column {column!r}")
        text_col, label_col = header.index("text"), header.index("label")
        line = reader.line_num + 1
        for row in reader:
            if len(row) != len(header):
                raise CorpusError(
                    f"{path}: line {line}: expected {len(header)} fields, found {len(row)}"
                )
            rows.append((row[text_col], row[label_col].strip()))
            line = reader.line_num + 1
    except csv.Error as exc:
        raise CorpusError(f"{path}: line {reader.line_num}: {exc}") from exc

    if not rows:
        raise CorpusError(f"{path}: zero data rows")
    class_names = tuple(sorted({label for _, label in rows}))
    index = {name: i for i, name in enumerate(class_names)}
    docs = tuple(Document(f"row-{k}", text, index[label]) for k, (text, label) in enumerate(rows))
    return Corpus(docs, class_names, str(path))


def write_corpus(corpus: Corpus, path, format: str | None = None) -> None:
    path = Path(path)
    fmt = format or _infer_format(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t" if fmt == "tsv" else ",", lineterminator="\n")
        writer.writerow(["text", "label"])
        for doc in corpus.documents:
            writer.writerow([doc.text, corpus.class_names[doc.label]])


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(corpus: Corpus, test_fraction: float = DEFAULT_TEST_FRACTION, seed: int = 0) -> Split:
    """Per-class shuffled split with ``round(class_count * test_fraction)`` test docs per class.

    One SplitMix64 stream (see :mod:`ideoclf.rng`) seeded by ``seed`` shuffles
    each class's indices in class-index order via Fisher-Yates; the first
    shuffled indices of each class go to the test set.
    """
    if not 0.0 < test_fraction < 1.0:
        raise CorpusError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    by_class: dict[int, list[int]] = {}
    for i, doc in enumerate(corpus.documents):
        by_class.setdefault(doc.label, []).append(i)
    for label, members in sorted(by_class.items()):
        if len(members) < 2:
            raise CorpusError(
                f"class {corpus.class_names[label]!r} has {len(members)} document(s); at least 2 required"
            )

    rng = Rng(seed)
    train, test = [], []
    for label in sorted(by_class):
        members = rng.shuffle(by_class[label])
        n_test = _round_half_up(len(members) * test_fraction)
        test.extend(members[:n_test])
        train.extend(members[n_test:])
    if not train or not test:
        raise CorpusError(f"test_fraction {test_fraction} leaves an empty train or test set")
    return Split(tuple(sorted(train)), tuple(sorted(test)), int(seed), float(test_fraction))


def class_distribution(corpus: Corpus) -> dict[str, int]:
    counts = Counter(doc.label for doc in corpus.documents)
    return {corpus.class_names[label]: counts[label] for label in sorted(counts)}


def format_distribution(distribution: dict[str, int]) -> str:
    """Two-column ``Class Label | Number of posts`` markdown table."""
    lines = ["| Class Label | Number of posts |", "|---|---|"]
    lines += [f"| {name} | {count} |" for name, count in distribution.items()]
    return "\n".join(lines)
