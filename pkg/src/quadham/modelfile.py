"""JSON model files.

    {
      "model": "coupled_xy",          # or oned / coupled_pp / angular / custom
      "K": 2,                         # optional for builtins
      "a": 2.0,
      "b": [0.0, 1.0],                # complex numbers are [re, im]
      "gamma": [[[1, 0], ...], ...],  # custom only, 2K x 2K of [re, im]
      "constant": 0.0,
      "symmetries": [{"kind": "antiunitary", "label": "A_x", "matrix": [...]}]
    }

A symmetry entry may omit ``matrix`` when its label names a builtin catalog
entry for that K.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .models import ModelSpec
from .symmetry import SymmetrySpec, builtin_symmetry


class ModelFileError(ValidationError):
    """The model file is unreadable or malformed."""


@dataclass(frozen=True, eq=False)
class ModelFile:
    spec: ModelSpec
    symmetries: list = field(default_factory=list)


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def encode_array(arr) -> list:
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return encode_complex(arr)
    return [encode_array(x) for x in arr]


def decode_complex(obj, what: str = "value") -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj
    ):
        return complex(obj[0], obj[1])
    raise ModelFileError(f"{what} must be a number or a [re, im] pair, got {obj!r}")


def decode_matrix(obj, what: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ModelFileError(f"{what} must be a square array of [re, im] pairs")
    n = len(obj)
    if any(len(r) != n for r in obj):
        raise ModelFileError(f"{what} must be square, got ragged rows")
    return np.array([[decode_complex(v, what) for v in row] for row in obj], dtype=complex)


def parse_model(doc: dict) -> ModelFile:
    if not isinstance(doc, dict):
        raise ModelFileError("model file must hold a JSON object")
    known = {"model", "K", "a", "b", "gamma", "constant", "symmetries"}
    extra = set(doc) - known
    if extra:
        raise ModelFileError(f"unknown fields: {sorted(extra)}")
    if "model" not in doc:
        raise ModelFileError("missing field 'model'")
    kwargs = {"name": doc["model"]}
    if "K" in doc:
        if not isinstance(doc["K"], int) or doc["K"] < 1:
            raise ModelFileError("K must be a positive integer")
        kwargs["K"] = doc["K"]
    if "a" in doc:
        if not isinstance(doc["a"], (int, float)):
            raise ModelFileError("a must be a real number")
        kwargs["a"] = float(doc["a"])
    if "b" in doc:
        kwargs["b"] = decode_complex(doc["b"], "b")
    if "gamma" in doc:
        if doc["model"] != "custom":
            raise ModelFileError("gamma is only accepted for the custom model")
        kwargs["gamma"] = decode_matrix(doc["gamma"], "gamma")
    if "constant" in doc:
        kwargs["constant"] = float(decode_complex(doc["constant"], "constant").real)
    spec = ModelSpec(**kwargs)

    syms = []
    for k, entry in enumerate(doc.get("symmetries", [])):
        if not isinstance(entry, dict) or "kind" not in entry:
            raise ModelFileError(f"symmetries[{k}] needs at least a 'kind'")
        label = entry.get("label", f"sym{k}")
        if "matrix" in entry:
            try:
                syms.append(SymmetrySpec(entry["kind"], decode_matrix(entry["matrix"], f"symmetries[{k}]"), label))
            except ValueError as exc:
                raise ModelFileError(str(exc)) from exc
        else:
            try:
                sym = builtin_symmetry(spec.K, label)
            except KeyError:
                raise ModelFileError(f"symmetries[{k}]: no matrix and no builtin named {label!r}") from None
            if str(sym.kind) != entry["kind"]:
                raise ModelFileError(f"symmetries[{k}]: builtin {label} is {sym.kind}")
            syms.append(sym)
    return ModelFile(spec, syms)


def load_model(path) -> ModelFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{path}: invalid JSON ({exc})") from exc
    return parse_model(doc)


def dump_model(model: ModelFile) -> dict:
    spec = model.spec
    doc = {"model": spec.name, "K": spec.K, "a": spec.a, "b": encode_complex(spec.b), "constant": spec.constant}
    if spec.gamma is not None:
        doc["gamma"] = encode_array(spec.gamma)
    if model.symmetries:
        doc["symmetries"] = [
            {"kind": str(s.kind), "label": s.label, "matrix": encode_array(s.matrix)} for s in model.symmetries
        ]
    return doc
