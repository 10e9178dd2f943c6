"""Bagged CART trees with sqrt-feature subsampling and majority vote."""

from __future__ import annotations

import numpy as np

from .tree import DecisionTreeModel


class RandomForestModel:
    def __init__(self, trees: list[DecisionTreeModel], n_classes: int):
        self.trees = trees
        self.n_classes = n_classes

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_classes: int,
        n_estimators: int = 30,
        max_depth: int | None = None,
        min_samples_split: int = 2,
        min_samples_leaf: int = 1,
        seed: int = 0,
    ) -> "RandomForestModel":
        n, d = X.shape
        max_features = max(1, int(np.sqrt(d)))
        trees = []
        # one child seed per tree so results stay identical under any
        # parallel fitting order
        for child in np.random.SeedSequence(seed).spawn(n_estimators):
            rng = np.random.default_rng(child)
            boot = rng.integers(0, n, size=n)
            trees.append(
                DecisionTreeModel.fit(
                    X[boot],
                    y[boot],
                    n_classes,
                    max_depth=max_depth,
                    min_samples_split=min_samples_split,
                    min_samples_leaf=min_samples_leaf,
                    max_features=max_features,
                    rng=rng,
                )
            )
        return cls(trees, n_classes)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        """Fraction of trees voting for each class."""
        votes = np.zeros((len(X), self.n_classes))
        for tree in self.trees:
            votes[np.arange(len(X)), tree.predict(X)] += 1.0
        return votes / len(self.trees)

    def to_payload(self) -> dict:
        return {"trees": [t.to_payload() for t in self.trees], "n_classes": self.n_classes}

    @classmethod
    def from_payload(cls, d: dict) -> "RandomForestModel":
        return cls([DecisionTreeModel.from_payload(t) for t in d["trees"]], int(d["n_classes"]))
