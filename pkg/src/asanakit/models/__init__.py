from .base import (
    DECISION_TREE,
    FAMILIES,
    GAUSSIAN_NB,
    GBDT,
    KNN,
    LINEAR_SVM,
    LOGISTIC_REGRESSION,
    MLP,
    ONE_VS_REST,
    PROBABILISTIC,
    RANDOM_FOREST,
    ModelSpec,
    TrainedModel,
    predict,
    predict_batch,
    train,
)
from .search import SearchSpec, random_search_cv
from .serialize import load_model, save_model

__all__ = [
    "FAMILIES",
    "KNN",
    "DECISION_TREE",
    "RANDOM_FOREST",
    "GAUSSIAN_NB",
    "LOGISTIC_REGRESSION",
    "LINEAR_SVM",
    "MLP",
    "GBDT",
    "ONE_VS_REST",
    "PROBABILISTIC",
    "ModelSpec",
    "TrainedModel",
    "SearchSpec",
    "train",
    "predict",
    "predict_batch",
    "random_search_cv",
    "save_model",
    "load_model",
]
