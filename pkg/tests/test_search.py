import numpy as np
import pytest

from asanakit.datasets import synth_mudra_dataset
from asanakit.errors import TooFewSamples
from asanakit.models import GBDT, KNN, SearchSpec, random_search_cv


@pytest.fixture(scope="module")
def data():
    return synth_mudra_dataset(per_class=30, noise_deg=6.0, seed=17)


def test_single_iteration_returns_the_sampled_spec(data):
    search = SearchSpec(KNN, {"k": [3, 5, 7]}, n_iter=1, cv_folds=3, seed=2)
    best, best_acc, trials = random_search_cv(search, data)
    assert len(trials) == 1
    assert best == trials[0][0]
    assert best_acc == trials[0][1]


def test_deterministic_trials(data):
    search = SearchSpec(
        GBDT,
        {"max_depth": (2, 4), "n_rounds": [10, 20], "learning_rate": (0.1, 0.5)},
        n_iter=4,
        cv_folds=3,
        seed=9,
    )
    a = random_search_cv(search, data)
    b = random_search_cv(search, data)
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2]


def test_best_is_argmax_of_trials(data):
    search = SearchSpec(
        GBDT, {"max_depth": (2, 4), "n_rounds": [10, 20]}, n_iter=6, cv_folds=3, seed=4
    )
    best, best_acc, trials = random_search_cv(search, data)
    assert best_acc == max(acc for _, acc in trials)
    first_max = next(spec for spec, acc in trials if acc == best_acc)
    assert best == first_max


def test_int_range_sampling_inclusive(data):
    search = SearchSpec(KNN, {"k": (1, 3)}, n_iter=30, cv_folds=3, seed=0)
    _, _, trials = random_search_cv(search, data)
    ks = {spec.hyperparams["k"] for spec, _ in trials}
    assert ks <= {1, 2, 3} and len(ks) == 3


def test_too_few_samples_for_folds():
    data = synth_mudra_dataset(per_class=3, noise_deg=6.0, seed=1)
    search = SearchSpec(KNN, {"k": [1]}, n_iter=1, cv_folds=5, seed=0)
    with pytest.raises(TooFewSamples):
        random_search_cv(search, data)


def test_search_spec_validation():
    with pytest.raises(ValueError):
        SearchSpec(KNN, {}, n_iter=0)
    with pytest.raises(ValueError):
        SearchSpec(KNN, {}, cv_folds=1)
