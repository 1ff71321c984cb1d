from .forest import DecisionTree, RandomForestModel, predict_forest, train_forest
from .logreg import (
    LogisticRegressionModel,
    logistic_gradient,
    logistic_objective,
    predict_logreg,
    train_logreg,
)
from .persistence import ModelBundle, load_model, save_model

__all__ = [
    "DecisionTree",
    "LogisticRegressionModel",
    "ModelBundle",
    "RandomForestModel",
    "load_model",
    "logistic_gradient",
    "logistic_objective",
    "predict_forest",
    "predict_logreg",
    "save_model",
    "train_forest",
    "train_logreg",
]
