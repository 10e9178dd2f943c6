"""Model specs, hyperparameter validation, and the train/predict dispatch."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..datasets import Dataset
from ..errors import InvalidHyperparam, LengthMismatch
from ..geometry import FeatureVector
from ._common import check_training_arrays
from .bayes import GaussianNbModel
from .forest import RandomForestModel
from .gbdt import GbdtModel
from .knn import KnnModel
from .linear import LinearSvmModel, LogisticRegressionModel
from .mlp import MlpModel
from .tree import DecisionTreeModel

KNN = "knn"
DECISION_TREE = "decision_tree"
RANDOM_FOREST = "random_forest"
GAUSSIAN_NB = "gaussian_nb"
LOGISTIC_REGRESSION = "logistic_regression"
LINEAR_SVM = "linear_svm"
MLP = "mlp"
GBDT = "gbdt"
ONE_VS_REST = "one_vs_rest"

FAMILIES = (
    KNN,
    DECISION_TREE,
    RANDOM_FOREST,
    GAUSSIAN_NB,
    LOGISTIC_REGRESSION,
    LINEAR_SVM,
    MLP,
    GBDT,
    ONE_VS_REST,
)

# families whose score vectors form a probability simplex; the rest emit
# raw decision values
PROBABILISTIC = {KNN, DECISION_TREE, RANDOM_FOREST, GAUSSIAN_NB,
                 LOGISTIC_REGRESSION, MLP, GBDT}


def _positive_int(lo=1):
    return lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= lo


def _optional_depth(v):
    return v is None or (isinstance(v, int) and not isinstance(v, bool) and v >= 1)


def _positive_float(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and float(v) > 0.0


def _non_negative_float(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and float(v) >= 0.0


def _fraction(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and 0.0 < float(v) <= 1.0


_SCHEMAS: dict[str, dict[str, tuple[object, object]]] = {
    KNN: {"k": (3, _positive_int()), "p": (2.0, _positive_float)},
    DECISION_TREE: {
        "max_depth": (None, _optional_depth),
        "min_samples_split": (2, _positive_int(2)),
        "min_samples_leaf": (1, _positive_int()),
    },
    RANDOM_FOREST: {
        "n_estimators": (30, _positive_int()),
        "max_depth": (None, _optional_depth),
        "min_samples_split": (2, _positive_int(2)),
        "min_samples_leaf": (1, _positive_int()),
    },
    GAUSSIAN_NB: {},
    LOGISTIC_REGRESSION: {
        "max_iter": (2500, _positive_int()),
        "learning_rate": (0.5, _positive_float),
        "reg_lambda": (0.0, _non_negative_float),
        "tol": (1e-6, _non_negative_float),
    },
    LINEAR_SVM: {
        "epochs": (300, _positive_int()),
        "batch_size": (64, _positive_int()),
        "learning_rate": (0.05, _positive_float),
        "reg_lambda": (1e-4, _non_negative_float),
    },
    MLP: {
        "hidden_size": (100, _positive_int()),
        "epochs": (200, _positive_int()),
        "batch_size": (32, _positive_int()),
        "learning_rate": (0.05, _positive_float),
        "reg_lambda": (1e-4, _non_negative_float),
        "tol": (1e-6, _non_negative_float),
    },
    GBDT: {
        "n_rounds": (100, _positive_int()),
        "max_depth": (6, _positive_int()),
        "learning_rate": (0.3, _positive_float),
        "subsample": (1.0, _fraction),
    },
    ONE_VS_REST: {"inner": (None, None)},  # validated recursively
}


@dataclass(frozen=True)
class ModelSpec:
    family: str
    hyperparams: dict = field(default_factory=dict)
    seed: int = 0

    def resolved(self) -> dict:
        """Defaults filled in and values validated; raises InvalidHyperparam."""
        if self.family not in FAMILIES:
            raise InvalidHyperparam(f"unknown family {self.family!r}")
        schema = _SCHEMAS[self.family]
        unknown = set(self.hyperparams) - set(schema)
        if unknown:
            raise InvalidHyperparam(f"{self.family}: unknown hyperparams {sorted(unknown)}")
        if self.family == ONE_VS_REST:
            inner = self.hyperparams.get("inner")
            if not isinstance(inner, ModelSpec):
                raise InvalidHyperparam("one_vs_rest needs an 'inner' ModelSpec")
            if inner.family == ONE_VS_REST:
                raise InvalidHyperparam("one_vs_rest cannot nest itself")
            inner.resolved()
            return {"inner": inner}
        out = {}
        for name, (default, check) in schema.items():
            value = self.hyperparams.get(name, default)
            if check is not None and not check(value):
                raise InvalidHyperparam(f"{self.family}: bad value {value!r} for {name!r}")
            out[name] = value
        return out

    def to_dict(self) -> dict:
        hp = dict(self.hyperparams)
        if isinstance(hp.get("inner"), ModelSpec):
            hp["inner"] = hp["inner"].to_dict()
        return {"family": self.family, "hyperparams": hp, "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        hp = dict(d.get("hyperparams", {}))
        if isinstance(hp.get("inner"), dict):
            hp["inner"] = cls.from_dict(hp["inner"])
        return cls(d["family"], hp, int(d.get("seed", 0)))


class OneVsRestModel:
    """One binary inner model per class; predicts the max inner score for
    the positive label."""

    def __init__(self, inner_models: list, inner_family: str, n_classes: int):
        self.inner_models = inner_models
        self.inner_family = inner_family
        self.n_classes = n_classes

    @classmethod
    def fit(cls, X, y, n_classes, inner: ModelSpec, seed: int) -> "OneVsRestModel":
        seeds = np.random.SeedSequence(seed).generate_state(n_classes)
        models = []
        for c in range(n_classes):
            y_bin = (y == c).astype(np.int64)
            sub = ModelSpec(inner.family, dict(inner.hyperparams), int(seeds[c]))
            models.append(_fit_family(sub, X, y_bin, 2))
        return cls(models, inner.family, n_classes)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        cols = [m.score_matrix(X)[:, 1] for m in self.inner_models]
        return np.stack(cols, axis=1)

    def to_payload(self) -> dict:
        return {
            "inner_family": self.inner_family,
            "n_classes": self.n_classes,
            "inner_payloads": [m.to_payload() for m in self.inner_models],
        }

    @classmethod
    def from_payload(cls, d: dict) -> "OneVsRestModel":
        impl_cls = _IMPL[d["inner_family"]]
        models = [impl_cls.from_payload(p) for p in d["inner_payloads"]]
        return cls(models, d["inner_family"], int(d["n_classes"]))


_IMPL = {
    KNN: KnnModel,
    DECISION_TREE: DecisionTreeModel,
    RANDOM_FOREST: RandomForestModel,
    GAUSSIAN_NB: GaussianNbModel,
    LOGISTIC_REGRESSION: LogisticRegressionModel,
    LINEAR_SVM: LinearSvmModel,
    MLP: MlpModel,
    GBDT: GbdtModel,
    ONE_VS_REST: OneVsRestModel,
}


def _fit_family(spec: ModelSpec, X: np.ndarray, y: np.ndarray, n_classes: int):
    hp = spec.resolved()
    check_training_arrays(X, y, n_classes)
    if spec.family == KNN:
        if hp["k"] > len(X):
            raise InvalidHyperparam(f"knn: k={hp['k']} exceeds {len(X)} training samples")
        return KnnModel.fit(X, y, n_classes, **hp)
    if spec.family == DECISION_TREE:
        return DecisionTreeModel.fit(X, y, n_classes, **hp)
    if spec.family == RANDOM_FOREST:
        return RandomForestModel.fit(X, y, n_classes, seed=spec.seed, **hp)
    if spec.family == GAUSSIAN_NB:
        return GaussianNbModel.fit(X, y, n_classes)
    if spec.family == LOGISTIC_REGRESSION:
        return LogisticRegressionModel.fit(X, y, n_classes, **hp)
    if spec.family == LINEAR_SVM:
        return LinearSvmModel.fit(X, y, n_classes, seed=spec.seed, **hp)
    if spec.family == MLP:
        return MlpModel.fit(X, y, n_classes, seed=spec.seed, **hp)
    if spec.family == GBDT:
        return GbdtModel.fit(X, y, n_classes, seed=spec.seed, **hp)
    if spec.family == ONE_VS_REST:
        return OneVsRestModel.fit(X, y, n_classes, hp["inner"], spec.seed)
    raise InvalidHyperparam(f"unknown family {spec.family!r}")


@dataclass
class TrainedModel:
    spec: ModelSpec
    class_names: list[str]
    feature_length: int
    impl: object

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        if X.shape[1] != self.feature_length:
            raise LengthMismatch(self.feature_length, X.shape[1])
        return self.impl.score_matrix(np.asarray(X, dtype=np.float64))


def train(spec: ModelSpec, train_set: Dataset) -> TrainedModel:
    X = train_set.X()
    y = train_set.y()
    impl = _fit_family(spec, X, y, len(train_set.class_names))
    return TrainedModel(spec, list(train_set.class_names), X.shape[1], impl)


def predict(model: TrainedModel, features) -> tuple[int, list[float]]:
    """(argmax label, per-class scores); ties break to the lowest class index."""
    if isinstance(features, FeatureVector):
        values = np.asarray(features.values, dtype=np.float64)
    else:
        values = np.asarray(features, dtype=np.float64).ravel()
    if values.shape[0] != model.feature_length:
        raise LengthMismatch(model.feature_length, values.shape[0])
    scores = model.score_matrix(values[None, :])[0]
    return int(np.argmax(scores)), scores.tolist()


def predict_batch(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    return np.argmax(model.score_matrix(np.asarray(X, dtype=np.float64)), axis=1)
