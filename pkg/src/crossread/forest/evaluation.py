"""Stratified cross-validation and accuracy/confusion reporting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ValidationError
from ..features import FeatureMatrix
from .ensemble import ForestConfig, ForestModel, predict, train
from .rng import SplitMix64


class EvaluationError(ValidationError):
    """Raised for unusable fold or evaluation requests."""


def stratified_kfold(
    labels: Sequence[int],
    ids: Sequence[str],
    k: int,
    seed: int = 1,
) -> dict[str, int]:
    """Assign each id a fold in [0, k) with balanced class counts.

    Ids are sorted first, so the assignment depends only on the id/label
    pairs and the seed, not on input order.  Within each class the
    sorted ids are shuffled once and dealt round-robin.  Every class
    must have at least k members.
    """
    if k < 2:
        raise EvaluationError("invalid-folds", f"k must be >= 2, got {k}")
    if len(labels) != len(ids):
        raise EvaluationError("invalid-folds", "labels and ids differ in length")
    if len(set(ids)) != len(ids):
        raise EvaluationError("duplicate-id", "fold assignment needs unique ids")

    by_class: dict[int, list[str]] = {}
    for label, doc_id in sorted(zip(labels, ids), key=lambda t: (t[0], t[1])):
        by_class.setdefault(int(label), []).append(doc_id)

    rng = SplitMix64(seed)
    assignment: dict[str, int] = {}
    for label in sorted(by_class):
        members = by_class[label]
        if len(members) < k:
            raise EvaluationError(
                "class-too-small",
                f"class {label} has {len(members)} members, fewer than k={k}",
            )
        rng.shuffle(members)
        for pos, doc_id in enumerate(members):
            assignment[doc_id] = pos % k
    return assignment


def confusion_matrix(
    gold: Sequence[int], predicted: Sequence[int], class_labels: Sequence[int]
) -> np.ndarray:
    """Rows index gold labels, columns predicted, in `class_labels` order."""
    index = {int(label): i for i, label in enumerate(class_labels)}
    matrix = np.zeros((len(class_labels), len(class_labels)), dtype=np.int64)
    for g, p in zip(gold, predicted):
        matrix[index[int(g)], index[int(p)]] += 1
    return matrix


@dataclass
class EvalResult:
    accuracy: float
    confusion: np.ndarray
    class_labels: tuple[int, ...]
    n_evaluated: int
    fold_assignments: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "confusion": [[int(v) for v in row] for row in self.confusion],
            "class_labels": list(self.class_labels),
            "n_evaluated": self.n_evaluated,
            "fold_assignments": dict(sorted(self.fold_assignments.items())),
        }


def evaluate_predictions(
    gold: Sequence[int],
    predicted: Sequence[int],
    class_labels: Sequence[int] | None = None,
    fold_assignments: dict[str, int] | None = None,
) -> EvalResult:
    if len(gold) == 0:
        raise EvaluationError("empty-evaluation", "no rows to evaluate")
    if class_labels is None:
        class_labels = sorted({int(g) for g in gold} | {int(p) for p in predicted})
    confusion = confusion_matrix(gold, predicted, class_labels)
    accuracy = float(np.trace(confusion) / confusion.sum())
    return EvalResult(
        accuracy=accuracy,
        confusion=confusion,
        class_labels=tuple(int(c) for c in class_labels),
        n_evaluated=int(confusion.sum()),
        fold_assignments=fold_assignments or {},
    )


def evaluate_split(
    model: ForestModel, test_matrix: FeatureMatrix
) -> EvalResult:
    """Fit-free evaluation of a trained model on held-out rows."""
    predicted = predict(model, test_matrix)
    return evaluate_predictions(
        [int(v) for v in test_matrix.labels],
        [int(v) for v in predicted],
        class_labels=model.class_labels,
    )


def cross_validate(
    matrix: FeatureMatrix,
    k: int = 5,
    config: ForestConfig | None = None,
    fold_seed: int = 1,
    extra_train: FeatureMatrix | None = None,
) -> EvalResult:
    """Stratified k-fold accuracy over `matrix`.

    Rows are canonicalized by (language, id) before folding, so row
    order never changes the result.  `extra_train` rows join every
    training fold unchanged (they are never evaluated).
    """
    matrix = matrix.sorted_by_key()
    assignment = stratified_kfold(
        [int(v) for v in matrix.labels], matrix.doc_ids, k, seed=fold_seed
    )
    if extra_train is not None:
        overlap = set(matrix.doc_ids) & set(extra_train.doc_ids)
        if overlap:
            raise EvaluationError(
                "leaky-folds",
                f"extra training rows repeat evaluated ids: {sorted(overlap)[:5]}",
            )

    all_gold: list[int] = []
    all_pred: list[int] = []
    class_labels = sorted({int(v) for v in matrix.labels})
    if extra_train is not None:
        class_labels = sorted(set(class_labels) | {int(v) for v in extra_train.labels})
    for fold in range(k):
        test_idx = [i for i, d in enumerate(matrix.doc_ids) if assignment[d] == fold]
        train_idx = [i for i, d in enumerate(matrix.doc_ids) if assignment[d] != fold]
        train_matrix = matrix.select(train_idx)
        test_matrix = matrix.select(test_idx)
        assert not set(test_matrix.doc_ids) & set(train_matrix.doc_ids)
        if extra_train is not None:
            train_matrix = train_matrix.concat(extra_train).sorted_by_key()
        model = train(train_matrix, config)
        predicted = predict(model, test_matrix)
        all_gold.extend(int(v) for v in test_matrix.labels)
        all_pred.extend(int(v) for v in predicted)
    return evaluate_predictions(
        all_gold, all_pred, class_labels=class_labels, fold_assignments=assignment
    )
