"""Versioned JSON model files; numeric arrays are stored as base64(zlib(.npy))."""
from __future__ import annotations

import base64
import io
import json
import zlib
from pathlib import Path
from typing import Optional

import numpy as np

from ..corpus import CommentClass
from .base import EstimatorSpec, TrainedModel

MODEL_FORMAT = "ytcomments-model"
MODEL_FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


class VersionMismatch(ModelFormatError):
    pass


def _encode_array(a: np.ndarray) -> dict:
    buf = io.BytesIO()
    np.save(buf, np.ascontiguousarray(a), allow_pickle=False)
    return {"__ndarray__": base64.b64encode(zlib.compress(buf.getvalue(), 6)).decode("ascii")}


def _decode_array(d: dict) -> np.ndarray:
    raw = zlib.decompress(base64.b64decode(d["__ndarray__"]))
    return np.load(io.BytesIO(raw), allow_pickle=False)


def _encode_value(v):
    if isinstance(v, np.ndarray):
        return _encode_array(v)
    if isinstance(v, dict):
        return {k: _encode_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_encode_value(x) for x in v]
    if isinstance(v, np.generic):
        return v.item()
    return v


def _decode_value(v):
    if isinstance(v, dict):
        if set(v) == {"__ndarray__"}:
            return _decode_array(v)
        return {k: _decode_value(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_decode_value(x) for x in v]
    return v


def _class_type(classes) -> str:
    if all(isinstance(c, CommentClass) for c in classes):
        return "comment_class"
    if all(isinstance(c, (int, np.integer)) and not isinstance(c, bool) for c in classes):
        return "int"
    return "str"


def _decode_classes(kind: str, values: list) -> tuple:
    if kind == "comment_class":
        return tuple(CommentClass.parse(v) for v in values)
    if kind == "int":
        return tuple(int(v) for v in values)
    return tuple(str(v) for v in values)


def model_to_dict(model: TrainedModel, metadata: Optional[dict] = None) -> dict:
    if not model.vectorizer_fingerprint:
        raise ModelFormatError("refusing to save a model without a vocabulary fingerprint")
    ctype = _class_type(model.classes)
    return {
        "format": MODEL_FORMAT,
        "format_version": MODEL_FORMAT_VERSION,
        "spec": model.spec.to_dict(),
        "class_type": ctype,
        "classes": [c.value if ctype == "comment_class" else (int(c) if ctype == "int" else str(c))
                    for c in model.classes],
        "n_features": model.n_features,
        "vectorizer_fingerprint": model.vectorizer_fingerprint,
        "converged": model.converged,
        # optimizer traces are diagnostics only; keep the file small
        "info": _encode_value({k: v for k, v in model.info.items() if k != "objective_history"}),
        "parameters": _encode_value(model.parameters),
        "metadata": metadata or {},
    }


def model_from_dict(d: dict) -> TrainedModel:
    if not isinstance(d, dict) or d.get("format") != MODEL_FORMAT:
        raise ModelFormatError("not a model file")
    if d.get("format_version") != MODEL_FORMAT_VERSION:
        raise VersionMismatch(
            f"model format version {d.get('format_version')!r} unsupported (expected {MODEL_FORMAT_VERSION})"
        )
    if not d.get("vectorizer_fingerprint"):
        raise ModelFormatError("model file carries no vocabulary fingerprint")
    try:
        return TrainedModel(
            spec=EstimatorSpec.from_dict(d["spec"]),
            classes=_decode_classes(d["class_type"], d["classes"]),
            parameters=_decode_value(d["parameters"]),
            n_features=int(d["n_features"]),
            vectorizer_fingerprint=d["vectorizer_fingerprint"],
            converged=bool(d.get("converged", True)),
            info=_decode_value(d.get("info", {})),
        )
    except (KeyError, TypeError, ValueError, zlib.error) as exc:
        raise ModelFormatError(f"corrupted model file: {exc}") from None


def save_model(model: TrainedModel, path, metadata: Optional[dict] = None) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model, metadata)) + "\n", encoding="utf-8")


def read_model_file(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"corrupted model file: {exc}") from None


def load_model(path) -> TrainedModel:
    return model_from_dict(read_model_file(path))


def load_model_with_metadata(path) -> tuple:
    d = read_model_file(path)
    return model_from_dict(d), d.get("metadata", {})
