"""Shared numeric helpers for the classifier families."""

from __future__ import annotations

import numpy as np

from ..errors import NonFiniteFeature, SingleClassDataset, TooFewSamples


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def one_hot(y: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.zeros((len(y), n_classes), dtype=np.float64)
    out[np.arange(len(y)), y] = 1.0
    return out


def check_training_arrays(X: np.ndarray, y: np.ndarray, n_classes: int) -> None:
    if not np.all(np.isfinite(X)):
        raise NonFiniteFeature("training features contain NaN or inf")
    if len(X) == 0 or n_classes < 2 or len(np.unique(y)) < 2:
        raise SingleClassDataset("training needs at least two classes with samples")


class Standardizer:
    """Per-feature zero-mean/unit-variance transform, fitted on the train split."""

    def __init__(self, mean: np.ndarray, std: np.ndarray):
        self.mean = mean
        self.std = std

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        std = X.std(axis=0)
        std[std < 1e-9] = 1.0  # constant features pass through un-scaled
        return cls(X.mean(axis=0), std)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) / self.std

    def to_payload(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_payload(cls, d: dict) -> "Standardizer":
        return cls(np.asarray(d["mean"], float), np.asarray(d["std"], float))


def stratified_fold_indices(y: np.ndarray, n_folds: int, seed: int) -> list[np.ndarray]:
    """Deterministic stratified k-fold: per-class shuffle, then round-robin
    assignment to folds. Every class must have at least n_folds samples."""
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    for label in np.unique(y):
        idx = np.flatnonzero(y == label)
        if len(idx) < n_folds:
            raise TooFewSamples(
                f"class index {int(label)} has {len(idx)} sample(s); need >= {n_folds} for "
                f"{n_folds}-fold stratified CV"
            )
        perm = rng.permutation(idx)
        for i, sample in enumerate(perm):
            folds[i % n_folds].append(int(sample))
    return [np.array(sorted(f), dtype=np.int64) for f in folds]
