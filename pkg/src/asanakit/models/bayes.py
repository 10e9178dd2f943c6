"""Gaussian naive Bayes with per-class feature means/variances."""

from __future__ import annotations

import numpy as np

VAR_FLOOR = 1e-9


class GaussianNbModel:
    def __init__(self, means, variances, log_priors):
        self.means = means
        self.variances = variances
        self.log_priors = log_priors
        self.n_classes = len(log_priors)

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, n_classes: int) -> "GaussianNbModel":
        d = X.shape[1]
        means = np.zeros((n_classes, d))
        variances = np.full((n_classes, d), VAR_FLOOR)
        priors = np.full(n_classes, 1e-12)
        for c in range(n_classes):
            block = X[y == c]
            if len(block) == 0:
                continue
            means[c] = block.mean(axis=0)
            variances[c] = np.maximum(block.var(axis=0), VAR_FLOOR)
            priors[c] = len(block) / len(X)
        return cls(means, variances, np.log(priors))

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        # log N(x; mu, var) summed over features, plus log prior
        diff = X[:, None, :] - self.means[None, :, :]
        log_lik = -0.5 * (
            np.log(2.0 * np.pi * self.variances)[None] + diff * diff / self.variances[None]
        ).sum(axis=2)
        logp = log_lik + self.log_priors[None]
        logp -= logp.max(axis=1, keepdims=True)
        p = np.exp(logp)
        return p / p.sum(axis=1, keepdims=True)

    def to_payload(self) -> dict:
        return {
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "log_priors": self.log_priors.tolist(),
        }

    @classmethod
    def from_payload(cls, d: dict) -> "GaussianNbModel":
        return cls(
            np.asarray(d["means"], float),
            np.asarray(d["variances"], float),
            np.asarray(d["log_priors"], float),
        )
