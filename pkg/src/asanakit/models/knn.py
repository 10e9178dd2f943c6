"""k-nearest-neighbors with Minkowski distance and uniform weights.

Neighbor ties on equal distance go to the lower training-sample index
(stable sort); vote ties go to the lowest class index.
"""

from __future__ import annotations

import numpy as np


class KnnModel:
    def __init__(self, X: np.ndarray, y: np.ndarray, n_classes: int, k: int, p: float):
        self.X = X
        self.y = y
        self.n_classes = n_classes
        self.k = k
        self.p = p

    @classmethod
    def fit(cls, X, y, n_classes, k=3, p=2.0) -> "KnnModel":
        return cls(X.copy(), y.copy(), n_classes, k, float(p))

    def _distances(self, Q: np.ndarray) -> np.ndarray:
        diff = np.abs(Q[:, None, :] - self.X[None, :, :])
        if self.p == 2.0:
            return np.sqrt(np.einsum("qnd,qnd->qn", diff, diff))
        return np.power(np.power(diff, self.p).sum(axis=2), 1.0 / self.p)

    def score_matrix(self, Q: np.ndarray) -> np.ndarray:
        out = np.zeros((len(Q), self.n_classes))
        # chunked so the (q, n, d) broadcast stays small
        step = max(1, int(2_000_000 / max(1, self.X.shape[0] * self.X.shape[1])))
        for start in range(0, len(Q), step):
            block = Q[start : start + step]
            dist = self._distances(block)
            nearest = np.argsort(dist, axis=1, kind="stable")[:, : self.k]
            for i, row in enumerate(nearest):
                votes = np.bincount(self.y[row], minlength=self.n_classes)
                out[start + i] = votes / self.k
        return out

    def to_payload(self) -> dict:
        return {
            "X": self.X.tolist(),
            "y": self.y.tolist(),
            "n_classes": self.n_classes,
            "k": self.k,
            "p": self.p,
        }

    @classmethod
    def from_payload(cls, d: dict) -> "KnnModel":
        return cls(
            np.asarray(d["X"], float),
            np.asarray(d["y"], np.int64),
            int(d["n_classes"]),
            int(d["k"]),
            float(d["p"]),
        )
