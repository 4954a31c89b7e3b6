"""Bagged ensemble of decision trees over a feature matrix.

Defaults mirror a classic bagging setup: 100 trees, bootstrap samples
as large as the training set, unlimited depth, and int(log2(p) + 1)
candidate features per node (a natural-log variant is available).  Tree
i draws every random decision from its own SplitMix64 stream seeded
with seed + i, so training is reproducible and independent of any
parallel scheduling.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ValidationError
from ..features import FeatureMatrix, schema_fingerprint
from .rng import SplitMix64
from .tree import Tree, grow_tree

FORMAT_VERSION = 1


class ModelError(ValidationError):
    """Raised for invalid forest configuration or model files."""


def num_candidate_features(n_predictors: int, natural_log: bool = False) -> int:
    """Features examined per node: int(log2(p) + 1), or ln with the flag.

    Clamped to [1, p].
    """
    if n_predictors < 1:
        raise ModelError("invalid-config", f"need at least one predictor, got {n_predictors}")
    log = math.log(n_predictors) if natural_log else math.log2(n_predictors)
    return max(1, min(n_predictors, int(log + 1.0)))


@dataclass(frozen=True)
class ForestConfig:
    num_trees: int = 100
    seed: int = 1
    bag_fraction: float = 1.0
    max_depth: int | None = None
    min_samples_leaf: int = 1
    criterion: str = "entropy"
    # None resolves to the log rule at fit time
    num_features: int | None = None
    natural_log_features: bool = False

    def validate(self) -> None:
        if self.num_trees < 1:
            raise ModelError("invalid-config", "num_trees must be >= 1")
        if not 0.0 < self.bag_fraction <= 1.0:
            raise ModelError("invalid-config", "bag_fraction must be in (0, 1]")
        if self.max_depth is not None and self.max_depth < 1:
            raise ModelError("invalid-config", "max_depth must be >= 1 or None")
        if self.min_samples_leaf < 1:
            raise ModelError("invalid-config", "min_samples_leaf must be >= 1")
        if self.criterion not in ("entropy", "gini"):
            raise ModelError("invalid-config", f"unknown criterion {self.criterion!r}")
        if self.num_features is not None and self.num_features < 1:
            raise ModelError("invalid-config", "num_features must be >= 1 or None")


@dataclass
class ForestModel:
    config: ForestConfig
    class_labels: tuple[int, ...]
    feature_names: tuple[str, ...]
    feature_groups: tuple[str, ...]
    fingerprint: str
    features_per_node: int
    trees: list[Tree] = field(default_factory=list)

    @property
    def per_tree_seeds(self) -> list[int]:
        return [self.config.seed + i for i in range(self.config.num_trees)]


def train(matrix: FeatureMatrix, config: ForestConfig | None = None) -> ForestModel:
    """Fit a forest on every row of `matrix`.

    Class labels are the sorted distinct grades present.  Leaf
    distributions always span the full label set, so trees whose
    bootstrap missed a class still vote over all of them.
    """
    config = config or ForestConfig()
    config.validate()
    if len(matrix.doc_ids) == 0:
        raise ModelError("empty-training-set", "no rows to train on")
    class_labels = tuple(sorted(set(int(v) for v in matrix.labels)))
    label_index = {label: i for i, label in enumerate(class_labels)}
    y = np.array([label_index[int(v)] for v in matrix.labels], dtype=np.int64)
    x = np.asarray(matrix.values, dtype=np.float64)
    n, p = x.shape

    features_per_node = (
        min(config.num_features, p)
        if config.num_features is not None
        else num_candidate_features(p, config.natural_log_features)
    )
    bag_size = max(1, int(round(config.bag_fraction * n)))

    model = ForestModel(
        config=config,
        class_labels=class_labels,
        feature_names=tuple(matrix.feature_names),
        feature_groups=tuple(matrix.feature_groups),
        fingerprint=schema_fingerprint(matrix.feature_names, matrix.feature_groups),
        features_per_node=features_per_node,
    )
    for tree_seed in model.per_tree_seeds:
        rng = SplitMix64(tree_seed)
        picks = np.array(rng.bootstrap_indices(n, bag_size), dtype=np.int64)
        tree = grow_tree(
            x[picks],
            y[picks],
            n_classes=len(class_labels),
            features_per_node=features_per_node,
            rng=rng,
            max_depth=config.max_depth,
            min_samples_leaf=config.min_samples_leaf,
            criterion=config.criterion,
        )
        model.trees.append(tree)
    return model


def predict_proba(model: ForestModel, matrix: FeatureMatrix) -> np.ndarray:
    """Mean leaf distribution over trees, rows aligned with `matrix`."""
    _check_schema(model, matrix)
    x = np.asarray(matrix.values, dtype=np.float64)
    total = np.zeros((len(x), len(model.class_labels)), dtype=np.float64)
    for tree in model.trees:
        total += tree.apply(x)
    return total / len(model.trees)


def predict(model: ForestModel, matrix: FeatureMatrix) -> np.ndarray:
    """Predicted grade per row; probability ties go to the lowest grade."""
    proba = predict_proba(model, matrix)
    # argmax returns the first maximum and class_labels are ascending
    picks = np.argmax(proba, axis=1)
    labels = np.array(model.class_labels, dtype=np.int64)
    return labels[picks]


def _check_schema(model: ForestModel, matrix: FeatureMatrix) -> None:
    fp = schema_fingerprint(matrix.feature_names, matrix.feature_groups)
    if fp != model.fingerprint:
        raise ModelError(
            "schema-mismatch",
            f"feature schema {fp} does not match the model's {model.fingerprint}",
        )


def save_model(model: ForestModel, path: str | Path) -> None:
    """Write the model as canonical JSON (stable bytes for a fixed seed)."""
    payload = {
        "format_version": FORMAT_VERSION,
        "config": {
            "num_trees": model.config.num_trees,
            "seed": model.config.seed,
            "bag_fraction": model.config.bag_fraction,
            "max_depth": model.config.max_depth,
            "min_samples_leaf": model.config.min_samples_leaf,
            "criterion": model.config.criterion,
            "num_features": model.config.num_features,
            "natural_log_features": model.config.natural_log_features,
        },
        "class_labels": list(model.class_labels),
        "feature_names": list(model.feature_names),
        "feature_groups": list(model.feature_groups),
        "schema_fingerprint": model.fingerprint,
        "features_per_node": model.features_per_node,
        "per_tree_seeds": model.per_tree_seeds,
        "trees": [tree.to_dict() for tree in model.trees],
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_model(path: str | Path) -> ForestModel:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ModelError("missing-file", f"cannot read model {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelError("malformed-model", f"model {path} is not valid JSON: {exc}") from exc
    if payload.get("format_version") != FORMAT_VERSION:
        raise ModelError(
            "unsupported-version",
            f"model {path} has format_version {payload.get('format_version')!r}, "
            f"expected {FORMAT_VERSION}",
        )
    cfg = payload["config"]
    config = ForestConfig(
        num_trees=cfg["num_trees"],
        seed=cfg["seed"],
        bag_fraction=cfg["bag_fraction"],
        max_depth=cfg["max_depth"],
        min_samples_leaf=cfg["min_samples_leaf"],
        criterion=cfg["criterion"],
        num_features=cfg["num_features"],
        natural_log_features=cfg["natural_log_features"],
    )
    return ForestModel(
        config=config,
        class_labels=tuple(payload["class_labels"]),
        feature_names=tuple(payload["feature_names"]),
        feature_groups=tuple(payload["feature_groups"]),
        fingerprint=payload["schema_fingerprint"],
        features_per_node=payload["features_per_node"],
        trees=[Tree.from_dict(t) for t in payload["trees"]],
    )
