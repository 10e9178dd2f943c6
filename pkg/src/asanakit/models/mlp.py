"""Single-hidden-layer perceptron: ReLU hidden units, softmax output,
cross-entropy loss, seeded mini-batch gradient descent."""

from __future__ import annotations

import numpy as np

from ._common import Standardizer, one_hot, softmax


def pack(W1, b1, W2, b2) -> np.ndarray:
    return np.concatenate([W1.ravel(), b1, W2.ravel(), b2])


def unpack(theta: np.ndarray, d: int, h: int, c: int):
    i = 0
    W1 = theta[i : i + d * h].reshape(d, h); i += d * h
    b1 = theta[i : i + h]; i += h
    W2 = theta[i : i + h * c].reshape(h, c); i += h * c
    b2 = theta[i : i + c]
    return W1, b1, W2, b2


def mlp_loss_and_grad(theta: np.ndarray, d: int, h: int, c: int,
                      X: np.ndarray, Y: np.ndarray, reg: float):
    """Cross-entropy loss and flat gradient; biases are unregularized."""
    W1, b1, W2, b2 = unpack(theta, d, h, c)
    n = len(X)
    Z1 = X @ W1 + b1
    A1 = np.maximum(Z1, 0.0)
    P = softmax(A1 @ W2 + b2)
    loss = -np.sum(Y * np.log(np.maximum(P, 1e-300))) / n
    loss += 0.5 * reg * (np.sum(W1 * W1) + np.sum(W2 * W2))
    dZ2 = (P - Y) / n
    gW2 = A1.T @ dZ2 + reg * W2
    gb2 = dZ2.sum(axis=0)
    dA1 = dZ2 @ W2.T
    dZ1 = dA1 * (Z1 > 0.0)
    gW1 = X.T @ dZ1 + reg * W1
    gb1 = dZ1.sum(axis=0)
    return loss, pack(gW1, gb1, gW2, gb2)


class MlpModel:
    def __init__(self, theta, d, h, n_classes, scaler):
        self.theta = theta
        self.d = d
        self.h = h
        self.n_classes = n_classes
        self.scaler = scaler

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_classes: int,
        hidden_size: int = 100,
        epochs: int = 200,
        batch_size: int = 32,
        learning_rate: float = 0.05,
        reg_lambda: float = 1e-4,
        tol: float = 1e-6,
        seed: int = 0,
    ) -> "MlpModel":
        scaler = Standardizer.fit(X)
        Xs = scaler.transform(X)
        n, d = Xs.shape
        Y = one_hot(y, n_classes)
        rng = np.random.default_rng(seed)
        W1 = rng.normal(0.0, np.sqrt(2.0 / d), size=(d, hidden_size))
        W2 = rng.normal(0.0, np.sqrt(2.0 / hidden_size), size=(hidden_size, n_classes))
        theta = pack(W1, np.zeros(hidden_size), W2, np.zeros(n_classes))
        prev = np.inf
        for _ in range(epochs):
            perm = rng.permutation(n)
            for start in range(0, n, batch_size):
                rows = perm[start : start + batch_size]
                _, grad = mlp_loss_and_grad(theta, d, hidden_size, n_classes,
                                            Xs[rows], Y[rows], reg_lambda)
                theta -= learning_rate * grad
            loss, _ = mlp_loss_and_grad(theta, d, hidden_size, n_classes, Xs, Y, reg_lambda)
            if abs(prev - loss) < tol:
                break
            prev = loss
        return cls(theta, d, hidden_size, n_classes, scaler)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        W1, b1, W2, b2 = unpack(self.theta, self.d, self.h, self.n_classes)
        A1 = np.maximum(self.scaler.transform(X) @ W1 + b1, 0.0)
        return softmax(A1 @ W2 + b2)

    def to_payload(self) -> dict:
        return {
            "theta": self.theta.tolist(),
            "d": self.d,
            "h": self.h,
            "n_classes": self.n_classes,
            "scaler": self.scaler.to_payload(),
        }

    @classmethod
    def from_payload(cls, d: dict) -> "MlpModel":
        return cls(
            np.asarray(d["theta"], float),
            int(d["d"]),
            int(d["h"]),
            int(d["n_classes"]),
            Standardizer.from_payload(d["scaler"]),
        )
