"""Versioned text serialization of trained pipelines (``.ideomodel`` files).

The file is UTF-8 JSON written by a deterministic emitter: keys keep their
insertion order, floats use Python's shortest round-trip ``repr``, and numpy
arrays become ``{"dtype": ..., "shape": [...], "data": [...]}`` with the data
flattened row-major. Writing, reading and writing again yields the same bytes.
See ``docs/model_format.md`` for the schema.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .pipeline import EXTRACTORS, Hyperparams, Pipeline
from .preprocess import PreprocessConfig

FORMAT_NAME = "ideoclf-model"
FORMAT_VERSION = 1
MODEL_SUFFIX = ".ideomodel"


class PersistError(ValueError):
    pass


@dataclass
class ModelState:
    pipeline_kind: tuple[str, str]
    preprocess_config: dict
    extractor_state: dict
    model_params: dict
    class_names: list[str]
    training_metadata: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_NAME,
            "format_version": self.format_version,
            "pipeline_kind": {"feature": self.pipeline_kind[0], "model": self.pipeline_kind[1]},
            "class_names": list(self.class_names),
            "preprocess_config": self.preprocess_config,
            "extractor_state": self.extractor_state,
            "model_params": self.model_params,
            "training_metadata": self.training_metadata,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelState":
        if data.get("format") != FORMAT_NAME:
            raise PersistError(f"not an {FORMAT_NAME} file (format={data.get('format')!r})")
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise PersistError(f"format_version mismatch: file has {version}, this library reads {FORMAT_VERSION}")
        try:
            kind = data["pipeline_kind"]
            return cls(
                (kind["feature"], kind["model"]),
                data["preprocess_config"],
                data["extractor_state"],
                data["model_params"],
                list(data["class_names"]),
                data["training_metadata"],
                version,
            )
        except (KeyError, TypeError) as exc:
            raise PersistError(f"malformed model file: missing {exc}") from exc


def to_jsonable(obj):
    """Convert numpy values and tuples into plain JSON types (arrays get a tagged dict)."""
    if isinstance(obj, np.ndarray):
        return {"dtype": str(obj.dtype), "shape": list(obj.shape), "data": obj.ravel().tolist()}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def from_jsonable(obj):
    """Inverse of :func:`to_jsonable` for tagged arrays."""
    if isinstance(obj, dict):
        if set(obj) == {"dtype", "shape", "data"}:
            return np.asarray(obj["data"], dtype=obj["dtype"]).reshape(obj["shape"])
        return {k: from_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [from_jsonable(v) for v in obj]
    return obj


def _scalar(value) -> str:
    if isinstance(value, float):
        if not math.isfinite(value):
            raise PersistError(f"cannot serialize non-finite float {value}")
        return repr(value)
    return json.dumps(value, ensure_ascii=False)


def _emit(obj, indent: int, out: list[str]) -> None:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for k, (key, value) in enumerate(obj.items()):
            out.append(pad + json.dumps(key, ensure_ascii=False) + ": ")
            _emit(value, indent + 1, out)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append("  " * indent + "}")
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            out.append("[" + ", ".join(_scalar(v) for v in obj) + "]")
            return
        out.append("[\n")
        for k, value in enumerate(obj):
            out.append(pad)
            _emit(value, indent + 1, out)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append("  " * indent + "]")
    else:
        out.append(_scalar(obj))


def dumps(obj) -> str:
    """Deterministic pretty JSON with compact scalar lists."""
    out: list[str] = []
    _emit(to_jsonable(obj), 0, out)
    return "".join(out) + "\n"


def parse(text: str, source: str = "<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise PersistError(f"{source}: parse error at byte offset {offset}: {exc.msg}") from exc


def save(state: ModelState, path) -> None:
    path = Path(path)
    try:
        path.write_text(dumps(state.to_dict()), encoding="utf-8")
    except OSError as exc:
        raise PersistError(f"cannot write model file {path}: {exc}") from exc


def load(path) -> ModelState:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise PersistError(f"cannot read model file {path}: {exc}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise PersistError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc
    return ModelState.from_dict(parse(text, str(path)))


def state_from_pipeline(pipe: Pipeline, class_names, metadata: dict | None = None) -> ModelState:
    meta = {"seed": pipe.seed, "hyperparameters": pipe.hparams.to_dict()}
    meta.update(metadata or {})
    return ModelState(
        (pipe.feature, pipe.model_kind),
        pipe.preprocess.to_dict(),
        to_jsonable(pipe.extractor.to_dict()),
        to_jsonable(pipe.model_params()),
        list(class_names),
        to_jsonable(meta),
    )


def pipeline_from_state(state: ModelState) -> Pipeline:
    feature, model = state.pipeline_kind
    meta = state.training_metadata
    pipe = Pipeline(
        feature,
        model,
        PreprocessConfig.from_dict(state.preprocess_config),
        Hyperparams.from_dict(meta.get("hyperparameters", {})),
        meta.get("seed", 0),
    )
    pipe.extractor = EXTRACTORS[feature].from_dict(from_jsonable(state.extractor_state))
    pipe.load_model_params(from_jsonable(state.model_params))
    return pipe
