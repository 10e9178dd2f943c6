"""Greedy CART classification tree with Gini impurity.

Splits enumerate sorted thresholds per feature; ties go to the lowest
feature index, then the lowest threshold. Used directly by the
decision-tree family and, with per-split feature subsampling, by the
random forest.
"""

from __future__ import annotations

import numpy as np


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - np.dot(p, p))


def _best_split(X, y, idx, n_classes, feature_ids, min_leaf):
    """Return (decrease, feature, threshold, left_selector) or None."""
    n = len(idx)
    parent_counts = np.bincount(y[idx], minlength=n_classes)
    parent_gini = _gini(parent_counts)
    best = None
    for f in feature_ids:
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        ys = y[idx][order]
        # prefix class counts: cum[i] = counts of ys[:i+1]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), ys] = 1.0
        cum = np.cumsum(onehot, axis=0)
        total = cum[-1]
        # candidate split after position i (left = first i+1 samples)
        pos = np.arange(min_leaf - 1, n - min_leaf)
        if len(pos) == 0:
            continue
        distinct = xs[pos] < xs[pos + 1]
        pos = pos[distinct]
        if len(pos) == 0:
            continue
        left = cum[pos]
        right = total - left
        nl = pos + 1.0
        nr = n - nl
        gini_l = 1.0 - np.einsum("ij,ij->i", left, left) / (nl * nl)
        gini_r = 1.0 - np.einsum("ij,ij->i", right, right) / (nr * nr)
        weighted = (nl * gini_l + nr * gini_r) / n
        k = int(np.argmin(weighted))
        decrease = parent_gini - float(weighted[k])
        if best is None or decrease > best[0]:
            thr = 0.5 * (xs[pos[k]] + xs[pos[k] + 1])
            best = (decrease, int(f), float(thr))
    return best


class DecisionTreeModel:
    """Fitted CART tree; nodes are nested dicts, leaves hold class counts."""

    def __init__(self, root: dict, n_classes: int):
        self.root = root
        self.n_classes = n_classes

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_classes: int,
        max_depth: int | None = None,
        min_samples_split: int = 2,
        min_samples_leaf: int = 1,
        max_features: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> "DecisionTreeModel":
        d = X.shape[1]

        def grow(idx: np.ndarray, depth: int) -> dict:
            counts = np.bincount(y[idx], minlength=n_classes)
            n = len(idx)
            impure = int(np.count_nonzero(counts)) > 1
            can_split = (
                impure
                and n >= min_samples_split
                and n >= 2 * min_samples_leaf
                and (max_depth is None or depth < max_depth)
            )
            if can_split:
                if max_features is not None and max_features < d:
                    feats = np.sort(rng.choice(d, size=max_features, replace=False))
                else:
                    feats = np.arange(d)
                best = _best_split(X, y, idx, n_classes, feats, min_samples_leaf)
                if best is not None:
                    _, f, thr = best
                    go_left = X[idx, f] <= thr
                    return {
                        "f": f,
                        "t": thr,
                        "l": grow(idx[go_left], depth + 1),
                        "r": grow(idx[~go_left], depth + 1),
                    }
            return {"counts": counts.tolist()}

        root = grow(np.arange(len(X)), 0)
        return cls(root, n_classes)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        """Leaf class-count fractions per sample."""
        out = np.empty((len(X), self.n_classes))

        def descend(node, idx):
            if "counts" in node:
                counts = np.asarray(node["counts"], dtype=np.float64)
                out[idx] = counts / counts.sum()
                return
            go_left = X[idx, node["f"]] <= node["t"]
            if go_left.any():
                descend(node["l"], idx[go_left])
            if (~go_left).any():
                descend(node["r"], idx[~go_left])

        if len(X):
            descend(self.root, np.arange(len(X)))
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.score_matrix(X), axis=1)

    def leaf_purities(self) -> list[float]:
        purities = []

        def walk(node):
            if "counts" in node:
                counts = np.asarray(node["counts"], dtype=np.float64)
                purities.append(float(counts.max() / counts.sum()))
            else:
                walk(node["l"])
                walk(node["r"])

        walk(self.root)
        return purities

    def to_payload(self) -> dict:
        return {"root": self.root, "n_classes": self.n_classes}

    @classmethod
    def from_payload(cls, d: dict) -> "DecisionTreeModel":
        return cls(d["root"], int(d["n_classes"]))
