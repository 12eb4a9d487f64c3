"""Command-line entry point: ``ideoclf {ingest-info,train,predict,evaluate,compare}``.

Settings resolve as defaults <- ``--config`` file <- command-line flags. The
config file holds flat ``key = value`` lines (``#`` comments); keys are the
long flag names with or without dashes, e.g. ``hidden_units = 64``.

Exit codes: 0 ok, 1 pipeline error, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import persist, report
from .corpus import DEFAULT_TEST_FRACTION, CorpusError, class_distribution, format_distribution, load_corpus, stratified_split
from .evaluate import REFERENCE_RESULTS, run_grid, score
from .neural import TrainingError
from .pipeline import FEATURES, MODELS, Hyperparams, Pipeline
from .preprocess import BANGLA_BLOCK, PreprocessConfig, load_stopwords, parse_script_range

log = logging.getLogger("ideoclf")

METRICS_FORMAT = "ideoclf-metrics"
METRICS_VERSION = 1
HPARAM_FIELDS = {f.name: f.type for f in fields(Hyperparams)}
_CASTS = {"int": int, "float": float}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    data: str | None = None
    format: str | None = None
    feature: str = "tfidf"
    model: str = "lstm"
    seed: int = 0
    test_fraction: float = DEFAULT_TEST_FRACTION
    stopwords: str | None = None
    script_range: list[str] = field(default_factory=lambda: [f"{BANGLA_BLOCK[0]:04X}-{BANGLA_BLOCK[1]:04X}"])
    out: str = "."
    hparams: Hyperparams = field(default_factory=Hyperparams)

    def to_dict(self) -> dict:
        top = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "hparams"}
        top["hyperparameters"] = self.hparams.to_dict()
        return top

    def lines(self) -> list[str]:
        items = {k: v for k, v in self.to_dict().items() if k != "hyperparameters"}
        items.update(self.hparams.to_dict())
        return [f"{k} = {','.join(v) if isinstance(v, list) else v}" for k, v in items.items()]

    def preprocess_config(self) -> PreprocessConfig:
        stop = load_stopwords(self.stopwords) if self.stopwords else frozenset()
        return PreprocessConfig(tuple(parse_script_range(r) for r in self.script_range), stop)


def read_config_file(path) -> dict[str, str]:
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{number}: expected key = value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _cast(key: str, value, kind: str):
    try:
        if kind == "list":
            return [v.strip() for v in value.split(",") if v.strip()] if isinstance(value, str) else list(value)
        return _CASTS.get(kind, str)(value)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc


_TOP_KINDS = {"data": "str", "format": "str", "feature": "str", "model": "str", "seed": "int",
              "test_fraction": "float", "stopwords": "str", "script_range": "list", "out": "str"}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    unknown = set(file_values) - set(_TOP_KINDS) - set(HPARAM_FIELDS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig()
    top = {}
    for key, kind in _TOP_KINDS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            top[key] = _cast(key, flag, kind)
        elif key in file_values:
            top[key] = _cast(key, file_values[key], kind)
    hp = {}
    for key, kind in HPARAM_FIELDS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            hp[key] = _cast(key, flag, kind)
        elif key in file_values:
            hp[key] = _cast(key, file_values[key], kind)
    for key, value in top.items():
        setattr(cfg, key, value)
    cfg.hparams = Hyperparams(**hp)
    if cfg.feature not in FEATURES:
        raise UsageError(f"--feature must be one of {', '.join(FEATURES)}")
    if cfg.model not in MODELS:
        raise UsageError(f"--model must be one of {', '.join(MODELS)}")
    try:
        cfg.preprocess_config()
    except OSError:
        pass  # unreadable stopword file is a pipeline error, reported later
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return cfg


def _need_data(cfg: RunConfig) -> str:
    if not cfg.data:
        raise UsageError("--data is required (flag or config file)")
    return cfg.data


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _metrics_doc(kind: str, cfg: RunConfig, **body) -> dict:
    return {"format": METRICS_FORMAT, "version": METRICS_VERSION, "kind": kind, "config": cfg.to_dict(), **body}


def _split_info(split, corpus) -> dict:
    return {"seed": split.seed, "test_fraction": split.test_fraction,
            "n_train": len(split.train_indices), "n_test": len(split.test_indices),
            "corpus_fingerprint": corpus.fingerprint()}


def cmd_ingest_info(cfg: RunConfig, args) -> int:
    corpus = load_corpus(_need_data(cfg), cfg.format)
    print(f"documents: {len(corpus)}")
    print(format_distribution(class_distribution(corpus)))
    split = stratified_split(corpus, cfg.test_fraction, cfg.seed)
    print(f"split (seed {cfg.seed}, test_fraction {cfg.test_fraction}): "
          f"{len(split.train_indices)} train / {len(split.test_indices)} test")
    return 0


def cmd_train(cfg: RunConfig, args) -> int:
    corpus = load_corpus(_need_data(cfg), cfg.format)
    split = stratified_split(corpus, cfg.test_fraction, cfg.seed)
    train_docs, test_docs = corpus.subset(split.train_indices), corpus.subset(split.test_indices)
    pipe = Pipeline(cfg.feature, cfg.model, cfg.preprocess_config(), cfg.hparams, cfg.seed)
    log.info("training %s + %s on %d documents", cfg.feature, cfg.model, len(train_docs))
    pipe.fit([d.text for d in train_docs], [d.label for d in train_docs])
    metrics = score([d.label for d in test_docs], pipe.predict([d.text for d in test_docs]))
    out = Path(cfg.out)
    model_path = Path(args.model_file) if args.model_file else out / f"{cfg.feature}-{cfg.model}{persist.MODEL_SUFFIX}"
    meta = {"run_config": cfg.to_dict(), "corpus_fingerprint": corpus.fingerprint(),
            "test_fraction": cfg.test_fraction}
    model_path.parent.mkdir(parents=True, exist_ok=True)
    persist.save(persist.state_from_pipeline(pipe, corpus.class_names, meta), model_path)
    doc = _metrics_doc("train", cfg, pipeline={"feature": cfg.feature, "model": cfg.model},
                       split=_split_info(split, corpus), test=metrics.to_dict(), history=pipe.history)
    metrics_path = out / "metrics.json"
    _write(metrics_path, persist.dumps(doc))
    print(f"{cfg.feature}+{cfg.model}: accuracy {metrics.accuracy:.4f} macro-F1 {metrics.macro_f1:.4f}")
    print(f"model written to {model_path}")
    print(f"metrics written to {metrics_path}")
    return 0


def _read_inputs(args) -> list[str]:
    if args.text is not None:
        return [args.text]
    if args.input:
        try:
            content = Path(args.input).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise OSError(f"cannot read input file {args.input}: {exc}") from exc
    else:
        content = sys.stdin.read()
    lines = content.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.rstrip("\r") for line in lines]


def cmd_predict(cfg: RunConfig, args) -> int:
    if not args.model_file:
        raise UsageError("predict needs --model-file")
    state = persist.load(args.model_file)
    pipe = persist.pipeline_from_state(state)
    texts = _read_inputs(args)
    if not texts:
        return 0
    labels, scores = pipe.predict_with_scores(texts)
    for label, value in zip(labels, scores):
        print(f"{state.class_names[label]}\t{float(value)!r}")
    return 0


def cmd_evaluate(cfg: RunConfig, args) -> int:
    if not args.model_file:
        raise UsageError("evaluate needs --model-file")
    state = persist.load(args.model_file)
    pipe = persist.pipeline_from_state(state)
    corpus = load_corpus(_need_data(cfg), cfg.format)
    if list(corpus.class_names) != list(state.class_names):
        raise CorpusError(f"corpus classes {list(corpus.class_names)} differ from model classes {state.class_names}")
    if args.all:
        docs, split_doc = list(corpus.documents), {"subset": "all", "n": len(corpus)}
    else:
        split = stratified_split(corpus, cfg.test_fraction, cfg.seed)
        docs, split_doc = corpus.subset(split.test_indices), {"subset": "test", **_split_info(split, corpus)}
    metrics = score([d.label for d in docs], pipe.predict([d.text for d in docs]))
    feature, model = state.pipeline_kind
    print(f"{feature}+{model} on {len(docs)} documents: accuracy {metrics.accuracy:.4f} "
          f"macro-F1 {metrics.macro_f1:.4f} weighted-F1 {metrics.weighted_f1:.4f}")
    print(f"confusion [true][pred]: {[list(r) for r in metrics.confusion]}")
    if args.metrics_out:
        doc = _metrics_doc("evaluate", cfg, pipeline={"feature": feature, "model": model},
                           model_file=str(args.model_file), split=split_doc, metrics=metrics.to_dict())
        _write(Path(args.metrics_out), persist.dumps(doc))
    return 0


def cmd_compare(cfg: RunConfig, args) -> int:
    corpus = load_corpus(_need_data(cfg), cfg.format)
    split = stratified_split(corpus, cfg.test_fraction, cfg.seed)
    grid = run_grid(corpus, split, cfg.preprocess_config(), cfg.hparams, cfg.seed)
    cells = []
    for (feature, model), cell in grid.cells.items():
        entry = {"feature": feature, "model": model, "status": "ok" if cell.ok else "error"}
        if cell.ok:
            entry["metrics"] = cell.report.to_dict()
            entry["history"] = cell.history
        else:
            entry["error"] = cell.error
        cells.append(entry)
    best = grid.best()
    reference = [{"feature": f, "model": m, **v} for (f, m), v in REFERENCE_RESULTS.items()]
    doc = _metrics_doc(
        "compare", cfg, split=_split_info(split, corpus), cells=cells,
        best=None if best is None else {"feature": best.feature, "model": best.model,
                                        "accuracy": best.report.accuracy, "macro_f1": best.report.macro_f1},
        reference_results=reference,
    )
    out = Path(cfg.out)
    _write(out / "metrics.json", persist.dumps(doc))
    _write(out / "tables.md", report.markdown_tables(grid, cfg.lines()))
    _write(out / "chart.svg", report.svg_chart(grid, cfg.lines()))
    print(report.markdown_tables(grid))
    print(f"wrote {out / 'metrics.json'}, {out / 'tables.md'}, {out / 'chart.svg'}")
    return 0 if best is not None else 1


COMMANDS = {
    "ingest-info": cmd_ingest_info,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="labeled corpus (CSV/TSV with text,label header)")
    p.add_argument("--format", choices=("csv", "tsv"), help="corpus format (default: from extension)")
    p.add_argument("--feature", choices=FEATURES)
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--seed", type=int)
    p.add_argument("--test-fraction", dest="test_fraction", type=float)
    p.add_argument("--stopwords", help="stopword file, one token per line")
    p.add_argument("--script-range", dest="script_range", action="append", metavar="HEXLO-HEXHI",
                   help="codepoint range to keep (repeatable; default 0980-09FF)")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--out", help="output directory")
    p.add_argument("-v", "--verbose", action="store_true")
    hp = p.add_argument_group("hyperparameters")
    for name, kind in HPARAM_FIELDS.items():
        hp.add_argument("--" + name.replace("_", "-"), dest=name, type=_CASTS[kind], metavar=kind.upper())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ideoclf", description="Political-text classification pipelines.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "ingest-info": "print corpus size, class distribution and split sizes",
        "train": "train one pipeline, write the .ideomodel file and metrics",
        "predict": "classify texts with a saved model",
        "evaluate": "score a saved model on a corpus",
        "compare": "run the full feature x model grid",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name in ("train", "predict", "evaluate"):
            p.add_argument("--model-file", dest="model_file", help="path of the .ideomodel file")
        if name == "predict":
            p.add_argument("--text", help="classify a single text")
            p.add_argument("--input", help="file with one text per line (default: stdin)")
        if name == "evaluate":
            p.add_argument("--all", action="store_true", help="score every document instead of the test split")
            p.add_argument("--metrics-out", dest="metrics_out", help="write a metrics file here")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        parser.error(str(exc))
    except (CorpusError, persist.PersistError, TrainingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
