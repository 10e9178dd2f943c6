"""Random hyperparameter search scored by stratified k-fold cross-validation.

Distributions: a list is a choice set; an (lo, hi) tuple of ints samples
uniform integers inclusive; a tuple of floats samples uniform floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..datasets import Dataset
from ._common import stratified_fold_indices
from .base import ModelSpec, _fit_family


@dataclass(frozen=True)
class SearchSpec:
    base_family: str
    param_distributions: dict = field(default_factory=dict)
    n_iter: int = 10
    cv_folds: int = 5
    seed: int = 0
    scoring: str = "accuracy"

    def __post_init__(self):
        if self.n_iter < 1:
            raise ValueError("n_iter must be >= 1")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")
        if self.scoring != "accuracy":
            raise ValueError(f"unsupported scoring {self.scoring!r}")


def _sample_value(dist, rng: np.random.Generator):
    if isinstance(dist, (list, tuple)) and not (
        isinstance(dist, tuple) and len(dist) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in dist
        )
    ):
        return dist[int(rng.integers(len(dist)))]
    lo, hi = dist
    if isinstance(lo, int) and isinstance(hi, int):
        return int(rng.integers(lo, hi + 1))
    return float(rng.uniform(lo, hi))


def random_search_cv(
    search: SearchSpec, dataset: Dataset
) -> tuple[ModelSpec, float, list[tuple[ModelSpec, float]]]:
    """Sample n_iter configurations, score each by mean CV accuracy, return
    the argmax (first sampled wins ties). Deterministic given the seed."""
    X = dataset.X()
    y = dataset.y()
    n_classes = len(dataset.class_names)
    folds = stratified_fold_indices(y, search.cv_folds, search.seed)
    rng = np.random.default_rng(search.seed)
    trial_seeds = np.random.SeedSequence(search.seed).generate_state(search.n_iter)

    trials: list[tuple[ModelSpec, float]] = []
    best: tuple[ModelSpec, float] | None = None
    for i in range(search.n_iter):
        hp = {name: _sample_value(search.param_distributions[name], rng)
              for name in sorted(search.param_distributions)}
        spec = ModelSpec(search.base_family, hp, seed=int(trial_seeds[i]))
        spec.resolved()
        accs = []
        for fold in folds:
            mask = np.ones(len(X), dtype=bool)
            mask[fold] = False
            impl = _fit_family(spec, X[mask], y[mask], n_classes)
            pred = np.argmax(impl.score_matrix(X[fold]), axis=1)
            accs.append(float(np.mean(pred == y[fold])))
        score = float(np.mean(accs))
        trials.append((spec, score))
        if best is None or score > best[1]:
            best = (spec, score)
    return best[0], best[1], trials
