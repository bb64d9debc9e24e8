"""Model persistence: self-describing JSON with flat arrays and shapes.

Every file carries a kind tag and version; loading rebuilds a model whose
behavior is bit-identical because floats serialize via repr (shortest
round-trip) and all structure is explicit.
"""

import json

import numpy as np

from .features import DescriptorConfig
from .forest import ForestModel, TreeNodes
from .handswitch import HandswitchConfig, MultiModelDetector, NeuronDetector
from .isomap import IsomapModel
from .pca import PcaModel
from .som import SomGrid, SomTrainConfig
from .svm import LinearSvmModel

FORMAT_VERSION = 1


class PersistError(ValueError):
    pass


def _pack(arr) -> dict:
    arr = np.asarray(arr)
    return {"shape": list(arr.shape), "data": [float(v) for v in arr.ravel()]}


def _unpack(block, dtype=np.float64) -> np.ndarray:
    arr = np.array(block["data"], dtype=dtype)
    shape = tuple(block["shape"])
    if arr.size != int(np.prod(shape, dtype=np.int64)):
        raise PersistError(f"array payload does not match shape {shape}")
    return arr.reshape(shape)


def _encode(model) -> dict:
    if isinstance(model, PcaModel):
        return {
            "kind": "pca",
            "mean": _pack(model.mean),
            "components": _pack(model.components),
            "eigenvalues": _pack(model.eigenvalues),
        }
    if isinstance(model, IsomapModel):
        return {
            "kind": "isomap",
            "k_neighbors": model.k_neighbors,
            "train_points": _pack(model.train_points),
            "train_embedding": _pack(model.train_embedding),
            "geodesic_sq_col_means": _pack(model.geodesic_sq_col_means),
            "eigenvalues": _pack(model.eigenvalues),
            "eigenvectors": _pack(model.eigenvectors),
            "residual_variance": model.residual_variance,
            "geodesics": _pack(model.geodesics),
        }
    if isinstance(model, SomGrid):
        return {
            "kind": "som",
            "grid_w": model.grid_w,
            "grid_h": model.grid_h,
            "codebook": _pack(model.codebook),
            "train_config": model.train_config.to_dict(),
        }
    if isinstance(model, LinearSvmModel):
        return {
            "kind": "svm",
            "classes": [str(c) for c in model.classes],
            "weights": _pack(model.weights),
            "bias": _pack(model.bias),
            "calibration": _pack(model.calibration),
            "class_weights": [[str(c), float(w)] for c, w in model.class_weights.items()],
            "seed": model.seed,
        }
    if isinstance(model, ForestModel):
        return {
            "kind": "forest",
            "classes": [str(c) for c in model.classes],
            "n_trees": model.n_trees,
            "max_features": model.max_features,
            "importances": _pack(model.importances),
            "seed": model.seed,
            "min_samples_split": model.min_samples_split,
            "dim": model.dim,
            "trees": [
                {
                    "feature": _pack(t.feature),
                    "threshold": _pack(t.threshold),
                    "left": _pack(t.left),
                    "right": _pack(t.right),
                    "value": _pack(t.value),
                }
                for t in model.trees
            ],
        }
    if isinstance(model, MultiModelDetector):
        return {
            "kind": "multimodel",
            "som": _encode(model.som),
            "global_model": _encode(model.global_model),
            "config": {
                "min_train": model.config.min_train,
                "assign_k": model.config.assign_k,
                "f1_threshold": model.config.f1_threshold,
                "svm_epochs": model.config.svm_epochs,
                "svm_lambda": model.config.svm_lambda,
                "seed": model.config.seed,
                "hog_config": model.config.hog_config.to_dict(),
            },
            "locals": [
                {
                    "neuron": nd.neuron,
                    "model": _encode(nd.model) if nd.model is not None else None,
                    "train_count": nd.train_count,
                    "local_f1": nd.local_f1,
                    "degraded": nd.degraded,
                }
                for nd in model.locals
            ],
        }
    raise PersistError(f"cannot persist object of type {type(model).__name__}")


def _decode(doc: dict):
    kind = doc.get("kind")
    if kind == "pca":
        return PcaModel(
            mean=_unpack(doc["mean"]),
            components=_unpack(doc["components"]),
            eigenvalues=_unpack(doc["eigenvalues"]),
        )
    if kind == "isomap":
        return IsomapModel(
            k_neighbors=doc["k_neighbors"],
            train_points=_unpack(doc["train_points"]),
            train_embedding=_unpack(doc["train_embedding"]),
            geodesic_sq_col_means=_unpack(doc["geodesic_sq_col_means"]),
            eigenvalues=_unpack(doc["eigenvalues"]),
            eigenvectors=_unpack(doc["eigenvectors"]),
            residual_variance=doc["residual_variance"],
            geodesics=_unpack(doc["geodesics"]),
        )
    if kind == "som":
        return SomGrid(
            grid_w=doc["grid_w"],
            grid_h=doc["grid_h"],
            codebook=_unpack(doc["codebook"]),
            train_config=SomTrainConfig(**doc["train_config"]),
        )
    if kind == "svm":
        return LinearSvmModel(
            classes=list(doc["classes"]),
            weights=_unpack(doc["weights"]),
            bias=_unpack(doc["bias"]),
            calibration=_unpack(doc["calibration"]),
            class_weights={c: w for c, w in doc["class_weights"]},
            seed=doc["seed"],
        )
    if kind == "forest":
        trees = [
            TreeNodes(
                feature=_unpack(t["feature"], np.int64),
                threshold=_unpack(t["threshold"]),
                left=_unpack(t["left"], np.int64),
                right=_unpack(t["right"], np.int64),
                value=_unpack(t["value"], np.int64),
            )
            for t in doc["trees"]
        ]
        return ForestModel(
            classes=list(doc["classes"]),
            trees=trees,
            n_trees=doc["n_trees"],
            max_features=doc["max_features"],
            importances=_unpack(doc["importances"]),
            seed=doc["seed"],
            min_samples_split=doc["min_samples_split"],
            dim=doc["dim"],
        )
    if kind == "multimodel":
        config = doc["config"]
        locals_ = [
            NeuronDetector(
                neuron=nd["neuron"],
                model=_decode(nd["model"]) if nd["model"] is not None else None,
                train_count=nd["train_count"],
                local_f1=nd["local_f1"],
                degraded=nd["degraded"],
            )
            for nd in doc["locals"]
        ]
        return MultiModelDetector(
            som=_decode(doc["som"]),
            locals=locals_,
            global_model=_decode(doc["global_model"]),
            config=HandswitchConfig(
                min_train=config["min_train"],
                assign_k=config["assign_k"],
                f1_threshold=config["f1_threshold"],
                svm_epochs=config["svm_epochs"],
                svm_lambda=config["svm_lambda"],
                seed=config["seed"],
                hog_config=DescriptorConfig.from_dict(config["hog_config"]),
            ),
        )
    raise PersistError(f"unknown model kind {kind!r}")


def save_model(model, path, seed=None) -> None:
    doc = _encode(model)
    doc["version"] = FORMAT_VERSION
    if seed is not None:
        doc["pipeline_seed"] = seed
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_model(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise PersistError(f"unreadable model file {path}: {exc}") from exc
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise PersistError(f"unsupported model version {version!r}")
    try:
        return _decode(doc)
    except (KeyError, TypeError) as exc:
        raise PersistError(f"malformed model file {path}: {exc}") from exc
