"""Random forest classifier, evaluation helpers and significance tests."""

from .ensemble import (
    ForestConfig,
    ForestModel,
    ModelError,
    load_model,
    num_candidate_features,
    predict,
    predict_proba,
    save_model,
    train,
)
from .evaluation import (
    EvalResult,
    EvaluationError,
    confusion_matrix,
    cross_validate,
    evaluate_predictions,
    evaluate_split,
    stratified_kfold,
)
from .rng import SplitMix64
from .stats import (
    StatsError,
    TTestResult,
    paired_t_test,
    regularized_incomplete_beta,
    t_cdf,
    t_two_tailed_p,
    welch_t_test,
)

__all__ = [
    "ForestConfig",
    "ForestModel",
    "ModelError",
    "load_model",
    "num_candidate_features",
    "predict",
    "predict_proba",
    "save_model",
    "train",
    "EvalResult",
    "EvaluationError",
    "confusion_matrix",
    "cross_validate",
    "evaluate_predictions",
    "evaluate_split",
    "stratified_kfold",
    "SplitMix64",
    "StatsError",
    "TTestResult",
    "paired_t_test",
    "regularized_incomplete_beta",
    "t_cdf",
    "t_two_tailed_p",
    "welch_t_test",
]
