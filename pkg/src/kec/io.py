"""Dataset CSV format and the model artifact file.

CSV: header ``f1,...,fp,label``; features as decimal literals at 17
significant digits (lossless for float64), label an integer in
{0, ..., K}, comma separated, UTF-8, no quoting.

Model artifact: a single self-describing JSON document with an explicit
schema version; matrices are stored row-major as nested lists. JSON float
serialization uses repr, so a save/load round trip reproduces predictions
bitwise.
"""

from __future__ import annotations

import json

import numpy as np

from .data import Dataset
from .errors import InvalidParams, NotFitted
from .kernels import BUILTIN_KERNELS
from .lda import LdaModel
from .selection import EncoderModel

SCHEMA = "kec-model/1"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def write_csv(path, dataset: Dataset) -> None:
    """Write a dataset in the f1..fp,label format."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join([f"f{j + 1}" for j in range(dataset.p)] + ["label"]))
        fh.write("\n")
        for row, label in zip(dataset.features, dataset.labels):
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write(f",{int(label)}\n")


def read_csv(path, num_classes=None) -> Dataset:
    """Load a dataset; K defaults to the largest label in the file."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header:
            raise InvalidParams(f"{path}: missing header row")
        columns = header.split(",")
        if columns[-1] != "label":
            raise InvalidParams(
                f"{path}: last column must be named 'label', got "
                f"{columns[-1]!r}"
            )
        p = len(columns) - 1
        features, labels = [], []
        for line_no, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != p + 1:
                raise InvalidParams(
                    f"{path}:{line_no}: expected {p + 1} fields, got "
                    f"{len(parts)}"
                )
            features.append([float(v) for v in parts[:p]])
            labels.append(int(parts[p]))
    feats = np.array(features, dtype=np.float64).reshape(len(labels), p)
    labs = np.array(labels, dtype=np.int64)
    if num_classes is None:
        num_classes = int(labs.max()) if labs.size else 1
        if num_classes < 1:
            raise InvalidParams(
                f"{path}: no positive labels; pass num_classes explicitly"
            )
    return Dataset(features=feats, labels=labs, num_classes=num_classes)


# ---------------------------------------------------------------------------
# Model artifact
# ---------------------------------------------------------------------------

def save_model(path, model: EncoderModel) -> None:
    """Persist a trained model as a schema-versioned JSON document."""
    if model.kernel.name not in BUILTIN_KERNELS:
        raise InvalidParams(
            f"cannot serialize model with custom kernel {model.kernel.name!r}"
        )
    unknown = [k for k in model.kernel_ids if k not in BUILTIN_KERNELS]
    if unknown:
        raise InvalidParams(f"cannot serialize custom kernels {unknown}")
    doc = {
        "schema": SCHEMA,
        "num_classes": model.num_classes,
        "num_features": model.num_features,
        "kernel": model.kernel.name,
        "kernel_params": {"distance_transform": model.distance_transform},
        "switch_threshold": model.switch_threshold,
        "class_means": model.class_means.tolist(),
        "lda": {
            "means": model.lda.means.tolist(),
            "pooled_cov": model.lda.pooled_cov.tolist(),
            "priors": model.lda.priors.tolist(),
            "ridge": model.lda.ridge,
        },
        "kernel_ids": list(model.kernel_ids),
        "cross_entropies": model.cross_entropies.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path) -> EncoderModel:
    """Load a model artifact written by save_model."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidParams(f"{path}: not a valid model artifact: {exc}")
    if doc.get("schema") != SCHEMA:
        raise InvalidParams(
            f"{path}: unsupported schema {doc.get('schema')!r}, expected "
            f"{SCHEMA}"
        )
    try:
        kernel = BUILTIN_KERNELS[doc["kernel"]]
        lda = LdaModel(
            means=np.array(doc["lda"]["means"], dtype=np.float64),
            pooled_cov=np.array(doc["lda"]["pooled_cov"], dtype=np.float64),
            priors=np.array(doc["lda"]["priors"], dtype=np.float64),
            ridge=float(doc["lda"]["ridge"]),
        )
        model = EncoderModel(
            class_means=np.array(doc["class_means"], dtype=np.float64),
            kernel=kernel,
            lda=lda,
            cross_entropies=np.array(doc["cross_entropies"], dtype=np.float64),
            kernel_ids=tuple(doc["kernel_ids"]),
            switch_threshold=float(doc["switch_threshold"]),
            distance_transform=doc["kernel_params"]["distance_transform"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise NotFitted(f"{path}: incomplete model artifact ({exc})")
    if model.class_means.ndim != 2 or model.class_means.shape[0] != doc["num_classes"]:
        raise NotFitted(f"{path}: class-mean matrix shape is inconsistent")
    return model
