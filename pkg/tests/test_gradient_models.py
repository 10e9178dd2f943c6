"""Gradient checks and fit sanity for the gradient-trained families."""

import numpy as np
import pytest

from asanakit.models import (
    LINEAR_SVM,
    LOGISTIC_REGRESSION,
    MLP,
    ModelSpec,
    predict,
    train,
)
from asanakit.models._common import one_hot
from asanakit.models.linear import augment, softmax_loss_and_grad
from asanakit.models.mlp import mlp_loss_and_grad

from test_knn import dataset_from_arrays

FD_STEP = 1e-5
MAX_REL_ERR = 1e-4


def central_difference(f, theta):
    grad = np.zeros_like(theta)
    for i in range(len(theta)):
        up = theta.copy(); up[i] += FD_STEP
        dn = theta.copy(); dn[i] -= FD_STEP
        grad[i] = (f(up) - f(dn)) / (2 * FD_STEP)
    return grad


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(a) + np.linalg.norm(b), 1e-12)


def random_problem(seed, n=10, d=4, c=3):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = rng.integers(0, c, size=n)
    return X, one_hot(y, c)


@pytest.mark.parametrize("seed", range(5))
def test_softmax_gradient_matches_central_differences(seed):
    X, Y = random_problem(seed)
    Xa = augment(X)
    rng = np.random.default_rng(seed + 100)
    W = rng.normal(scale=0.5, size=(Xa.shape[1], Y.shape[1]))
    _, grad = softmax_loss_and_grad(W, Xa, Y, reg=0.01)
    fd = central_difference(
        lambda w: softmax_loss_and_grad(w.reshape(W.shape), Xa, Y, 0.01)[0], W.ravel()
    )
    assert rel_err(grad.ravel(), fd) <= MAX_REL_ERR


@pytest.mark.parametrize("seed", range(5))
def test_mlp_gradient_matches_central_differences(seed):
    X, Y = random_problem(seed)
    d, h, c = X.shape[1], 6, Y.shape[1]
    rng = np.random.default_rng(seed + 200)
    theta = rng.normal(scale=0.5, size=d * h + h + h * c + c)
    _, grad = mlp_loss_and_grad(theta, d, h, c, X, Y, reg=0.01)
    fd = central_difference(lambda t: mlp_loss_and_grad(t, d, h, c, X, Y, 0.01)[0], theta)
    assert rel_err(grad, fd) <= MAX_REL_ERR


def blobs(seed=0, n_per=40, n_classes=3):
    rng = np.random.default_rng(seed)
    centers = rng.uniform(20, 160, size=(n_classes, 5))
    X = np.vstack([c + rng.normal(0, 4, size=(n_per, 5)) for c in centers])
    y = np.repeat(np.arange(n_classes), n_per)
    return X, y


@pytest.mark.parametrize(
    "family,params",
    [
        (LOGISTIC_REGRESSION, {}),
        (LINEAR_SVM, {}),
        (MLP, {"hidden_size": 32, "epochs": 120}),
    ],
)
def test_fits_separable_blobs(family, params):
    X, y = blobs()
    ds = dataset_from_arrays(np.hstack([X, np.zeros((len(X), 3))]), y, ["a", "b", "c"])
    model = train(ModelSpec(family, params, seed=0), ds)
    preds = [predict(model, x)[0] for x in ds.X()]
    assert np.mean(np.array(preds) == y) >= 0.98


def test_logreg_iteration_cap_honored():
    X, y = blobs(1)
    ds = dataset_from_arrays(np.hstack([X, np.zeros((len(X), 3))]), y, ["a", "b", "c"])
    model = train(
        ModelSpec(LOGISTIC_REGRESSION, {"max_iter": 7, "tol": 0.0}, seed=0), ds
    )
    assert model.impl.n_iter_run == 7


def test_standardizer_baked_into_model():
    X, y = blobs(2)
    ds = dataset_from_arrays(np.hstack([X, np.zeros((len(X), 3))]), y, ["a", "b", "c"])
    model = train(ModelSpec(LOGISTIC_REGRESSION, {}, seed=0), ds)
    scaler = model.impl.scaler
    assert np.all(scaler.std > 0)
    # constant padding columns pass through with unit scale
    assert scaler.std[-1] == 1.0
