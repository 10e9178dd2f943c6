"""Gradient-trained linear families: multinomial logistic regression and a
one-vs-rest hinge-loss linear SVM.

Both standardize features internally (the scaler is baked into the saved
model) because raw joint angles live on a [0, 180] scale that gradient
descent handles poorly.
"""

from __future__ import annotations

import numpy as np

from ._common import Standardizer, one_hot, softmax


def augment(X: np.ndarray) -> np.ndarray:
    """Append a bias column of ones."""
    return np.hstack([X, np.ones((len(X), 1))])


def softmax_loss_and_grad(W: np.ndarray, Xa: np.ndarray, Y: np.ndarray, reg: float):
    """Cross-entropy loss and gradient for weights W ((d+1) x C) on
    bias-augmented inputs. The bias row is excluded from regularization."""
    n = len(Xa)
    P = softmax(Xa @ W)
    loss = -np.sum(Y * np.log(np.maximum(P, 1e-300))) / n
    loss += 0.5 * reg * np.sum(W[:-1] ** 2)
    grad = Xa.T @ (P - Y) / n
    grad[:-1] += reg * W[:-1]
    return loss, grad


class LogisticRegressionModel:
    def __init__(self, W: np.ndarray, scaler: Standardizer, n_classes: int, n_iter_run: int):
        self.W = W
        self.scaler = scaler
        self.n_classes = n_classes
        self.n_iter_run = n_iter_run

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_classes: int,
        max_iter: int = 2500,
        learning_rate: float = 0.5,
        reg_lambda: float = 0.0,
        tol: float = 1e-6,
    ) -> "LogisticRegressionModel":
        scaler = Standardizer.fit(X)
        Xa = augment(scaler.transform(X))
        Y = one_hot(y, n_classes)
        W = np.zeros((Xa.shape[1], n_classes))
        prev = np.inf
        it = 0
        for it in range(1, max_iter + 1):
            loss, grad = softmax_loss_and_grad(W, Xa, Y, reg_lambda)
            W -= learning_rate * grad
            if abs(prev - loss) < tol:
                break
            prev = loss
        return cls(W, scaler, n_classes, it)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        return softmax(augment(self.scaler.transform(X)) @ self.W)

    def to_payload(self) -> dict:
        return {
            "W": self.W.tolist(),
            "scaler": self.scaler.to_payload(),
            "n_classes": self.n_classes,
            "n_iter_run": self.n_iter_run,
        }

    @classmethod
    def from_payload(cls, d: dict) -> "LogisticRegressionModel":
        return cls(
            np.asarray(d["W"], float),
            Standardizer.from_payload(d["scaler"]),
            int(d["n_classes"]),
            int(d["n_iter_run"]),
        )


class LinearSvmModel:
    """One-vs-rest linear SVM trained by seeded mini-batch subgradient
    descent on the hinge loss with L2 regularization. Scores are margins."""

    def __init__(self, W: np.ndarray, scaler: Standardizer, n_classes: int):
        self.W = W  # (d+1) x C
        self.scaler = scaler
        self.n_classes = n_classes

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_classes: int,
        epochs: int = 300,
        batch_size: int = 64,
        learning_rate: float = 0.05,
        reg_lambda: float = 1e-4,
        seed: int = 0,
    ) -> "LinearSvmModel":
        scaler = Standardizer.fit(X)
        Xa = augment(scaler.transform(X))
        n, d1 = Xa.shape
        # +1 for the target class, -1 for the rest, one column per class
        Ypm = 2.0 * one_hot(y, n_classes) - 1.0
        W = np.zeros((d1, n_classes))
        rng = np.random.default_rng(seed)
        for _ in range(epochs):
            perm = rng.permutation(n)
            for start in range(0, n, batch_size):
                rows = perm[start : start + batch_size]
                Xb, Yb = Xa[rows], Ypm[rows]
                margins = Yb * (Xb @ W)
                viol = (margins < 1.0).astype(np.float64)
                grad = -(Xb.T @ (Yb * viol)) / len(rows)
                grad[:-1] += reg_lambda * W[:-1]
                W -= learning_rate * grad
        return cls(W, scaler, n_classes)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        return augment(self.scaler.transform(X)) @ self.W

    def to_payload(self) -> dict:
        return {
            "W": self.W.tolist(),
            "scaler": self.scaler.to_payload(),
            "n_classes": self.n_classes,
        }

    @classmethod
    def from_payload(cls, d: dict) -> "LinearSvmModel":
        return cls(
            np.asarray(d["W"], float),
            Standardizer.from_payload(d["scaler"]),
            int(d["n_classes"]),
        )
