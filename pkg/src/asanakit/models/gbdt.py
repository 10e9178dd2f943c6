"""Multi-class gradient-boosted decision trees.

Each round fits one regression tree per class to the softmax residuals
(one-hot minus predicted probability), with second-order leaf values
G/(H+lambda) as in the usual boosted-tree formulation. Split finding is
histogram-based: features are quantile-binned once per fit, so node scans
are O(n + bins) per feature. The training cross-entropy is recorded after
every round.
"""

from __future__ import annotations

import numpy as np

from ._common import one_hot, softmax

N_BINS = 64
LAMBDA = 1.0
LEAF_CLIP = 4.0
MIN_GAIN = 1e-12
MIN_CHILD = 1


def _bin_features(X: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Quantile cut points per feature; bin index = count of cuts <= x."""
    n, d = X.shape
    cuts: list[np.ndarray] = []
    binned = np.empty((n, d), dtype=np.int32)
    qs = np.linspace(0.0, 1.0, N_BINS + 1)[1:-1]
    for f in range(d):
        col = X[:, f]
        c = np.unique(np.quantile(col, qs))
        c = c[(c > col.min()) & (c <= col.max())]
        cuts.append(c)
        binned[:, f] = np.searchsorted(c, col, side="right")
    return binned, cuts


def _fit_tree(binned, cuts, g, h, idx, max_depth):
    def grow(node_idx, depth):
        G = float(g[node_idx].sum())
        H = float(h[node_idx].sum())
        n = len(node_idx)
        best = None
        if depth < max_depth and n >= 2 * MIN_CHILD:
            parent_score = G * G / (H + LAMBDA)
            for f in range(binned.shape[1]):
                nb = len(cuts[f]) + 1
                if nb < 2:
                    continue
                b = binned[node_idx, f]
                gb = np.bincount(b, weights=g[node_idx], minlength=nb)
                hb = np.bincount(b, weights=h[node_idx], minlength=nb)
                cb = np.bincount(b, minlength=nb)
                GL = np.cumsum(gb)[:-1]
                HL = np.cumsum(hb)[:-1]
                NL = np.cumsum(cb)[:-1]
                valid = (NL >= MIN_CHILD) & (n - NL >= MIN_CHILD)
                if not valid.any():
                    continue
                GR = G - GL
                HR = H - HL
                gain = GL * GL / (HL + LAMBDA) + GR * GR / (HR + LAMBDA) - parent_score
                gain[~valid] = -np.inf
                k = int(np.argmax(gain))
                if gain[k] > MIN_GAIN and (best is None or gain[k] > best[0]):
                    best = (float(gain[k]), f, k)
        if best is None:
            value = G / (H + LAMBDA)
            return {"v": float(np.clip(value, -LEAF_CLIP, LEAF_CLIP))}
        _, f, k = best
        go_left = binned[node_idx, f] <= k
        return {
            "f": int(f),
            "t": float(cuts[f][k]),
            "l": grow(node_idx[go_left], depth + 1),
            "r": grow(node_idx[~go_left], depth + 1),
        }

    return grow(idx, 0)


def _tree_values(node, X, idx, out):
    if "v" in node:
        out[idx] = node["v"]
        return
    go_left = X[idx, node["f"]] < node["t"]
    if go_left.any():
        _tree_values(node["l"], X, idx[go_left], out)
    if (~go_left).any():
        _tree_values(node["r"], X, idx[~go_left], out)


def _apply_tree(node, X):
    out = np.empty(len(X))
    if len(X):
        _tree_values(node, X, np.arange(len(X)), out)
    return out


def _ce_loss(F, Y):
    P = softmax(F)
    return float(-np.sum(Y * np.log(np.maximum(P, 1e-300))) / len(Y))


class GbdtModel:
    def __init__(self, rounds: list[list[dict]], n_classes: int, learning_rate: float,
                 loss_history: list[float]):
        self.rounds = rounds
        self.n_classes = n_classes
        self.learning_rate = learning_rate
        self.loss_history = loss_history

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_classes: int,
        n_rounds: int = 100,
        max_depth: int = 6,
        learning_rate: float = 0.3,
        subsample: float = 1.0,
        seed: int = 0,
    ) -> "GbdtModel":
        n = len(X)
        Y = one_hot(y, n_classes)
        binned, cuts = _bin_features(X)
        F = np.zeros((n, n_classes))
        rng = np.random.default_rng(seed)
        rounds: list[list[dict]] = []
        history = [_ce_loss(F, Y)]
        all_idx = np.arange(n)
        for _ in range(n_rounds):
            P = softmax(F)
            G = Y - P          # negative gradient of the cross-entropy
            H = P * (1.0 - P)
            if subsample < 1.0:
                m = max(2, int(round(subsample * n)))
                idx = np.sort(rng.permutation(n)[:m])
            else:
                idx = all_idx
            trees = []
            for c in range(n_classes):
                tree = _fit_tree(binned, cuts, G[:, c], H[:, c], idx, max_depth)
                F[:, c] += learning_rate * _apply_tree(tree, X)
                trees.append(tree)
            rounds.append(trees)
            history.append(_ce_loss(F, Y))
        return cls(rounds, n_classes, learning_rate, history)

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        F = np.zeros((len(X), self.n_classes))
        for trees in self.rounds:
            for c, tree in enumerate(trees):
                F[:, c] += self.learning_rate * _apply_tree(tree, X)
        return F

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.raw_scores(X))

    def to_payload(self) -> dict:
        return {
            "rounds": self.rounds,
            "n_classes": self.n_classes,
            "learning_rate": self.learning_rate,
            "loss_history": self.loss_history,
        }

    @classmethod
    def from_payload(cls, d: dict) -> "GbdtModel":
        return cls(
            d["rounds"],
            int(d["n_classes"]),
            float(d["learning_rate"]),
            list(d["loss_history"]),
        )
