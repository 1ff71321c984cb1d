from .configs import (
    ALL_CONFIGS,
    Balancing,
    ExperimentConfig,
    Hyperparameters,
    ModelKind,
    hyperparameter_grid,
)
from .experiment import (
    ExperimentResult,
    FeatureCache,
    FoldResult,
    grid_search,
    run_experiment,
    train_final_model,
)
from .metrics import LabelMetrics, MetricsReport, format_table, score_predictions
from .splits import Fold, kfold_splits, leave_one_issue_out, stratified_kfold

__all__ = [
    "ALL_CONFIGS",
    "Balancing",
    "ExperimentConfig",
    "ExperimentResult",
    "FeatureCache",
    "Fold",
    "FoldResult",
    "Hyperparameters",
    "LabelMetrics",
    "MetricsReport",
    "ModelKind",
    "format_table",
    "grid_search",
    "hyperparameter_grid",
    "kfold_splits",
    "leave_one_issue_out",
    "run_experiment",
    "score_predictions",
    "stratified_kfold",
    "train_final_model",
]
