import numpy as np
import pytest

from asanakit.datasets import Dataset, make_sample
from asanakit.models import KNN, ModelSpec, predict, train
from asanakit.skeleton import Kind


def dataset_from_arrays(X, y, class_names, kind=Kind.BODY):
    width = 8 if kind is Kind.BODY else 19
    samples = []
    for i, (row, label) in enumerate(zip(X, y)):
        padded = np.zeros(width)
        padded[: len(row)] = row
        samples.append(make_sample(kind, padded, int(label), class_names[label], f"s{i}"))
    return Dataset(kind, samples, list(class_names))


def brute_force_knn(X_train, y_train, query, k, n_classes, p=2.0):
    """Independent oracle: full distance sort with (distance, index) keys."""
    dists = [
        (sum(abs(a - b) ** p for a, b in zip(row, query)) ** (1.0 / p), i)
        for i, row in enumerate(X_train)
    ]
    dists.sort()
    votes = [0] * n_classes
    for _, i in dists[:k]:
        votes[y_train[i]] += 1
    return max(range(n_classes), key=lambda c: (votes[c], -c))


def test_k1_memorizes_training_points():
    rng = np.random.default_rng(3)
    X = rng.uniform(0, 180, size=(30, 8))
    y = rng.integers(0, 3, size=30)
    ds = dataset_from_arrays(X, y, ["a", "b", "c"])
    model = train(ModelSpec(KNN, {"k": 1}, seed=0), ds)
    for i in range(30):
        label, _ = predict(model, X[i])
        assert label == y[i]


def test_hand_computed_toy_case():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [5.0, 5.0], [5.0, 6.0]])
    y = np.array([0, 0, 1, 1])
    ds = dataset_from_arrays(X, y, ["A", "B"])
    model = train(ModelSpec(KNN, {"k": 3}, seed=0), ds)
    query = np.zeros(8)
    query[:2] = (0.2, 0.4)
    label, scores = predict(model, query)
    assert label == 0
    assert scores == pytest.approx([2 / 3, 1 / 3])


@pytest.mark.parametrize("k", [3, 5, 9])
def test_matches_brute_force_oracle(k):
    rng = np.random.default_rng(k)
    X_train = rng.uniform(0, 180, size=(200, 8))
    y_train = rng.integers(0, 4, size=200)
    queries = rng.uniform(0, 180, size=(200, 8))
    ds = dataset_from_arrays(X_train, y_train, ["a", "b", "c", "d"])
    model = train(ModelSpec(KNN, {"k": k}, seed=0), ds)
    for q in queries:
        expected = brute_force_knn(X_train, y_train, q, k, 4)
        got, _ = predict(model, q)
        assert got == expected


def test_minkowski_p1():
    X = np.array([[0.0, 0.0], [10.0, 0.0]])
    y = np.array([0, 1])
    ds = dataset_from_arrays(X, y, ["a", "b"])
    model = train(ModelSpec(KNN, {"k": 1, "p": 1.0}, seed=0), ds)
    # under L1 the diagonal point (4, 4.5) is closer to (10, 0): 10.5 vs 8.5
    q = np.zeros(8)
    q[:2] = (6.0, 4.5)
    assert predict(model, q)[0] == brute_force_knn(X, y, q, 1, 2, p=1.0)
