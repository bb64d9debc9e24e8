import numpy as np
import pytest

from egocontext.svm import (
    calibrated_probability,
    svm_predict,
    svm_train,
    svm_training_loss_history,
)


def separable_fixture(seed=0, n=60, gap=4.0):
    rng = np.random.default_rng(seed)
    a = rng.normal(loc=(-gap / 2, 0), scale=0.4, size=(n, 2))
    b = rng.normal(loc=(gap / 2, 0), scale=0.4, size=(n, 2))
    X = np.vstack([a, b])
    labels = np.array(["neg"] * n + ["pos"] * n)
    return X, labels


def test_separable_fixture_trains_to_perfect_accuracy():
    X, labels = separable_fixture()
    model = svm_train(X, labels)
    assert (svm_predict(model, X) == labels).mean() == 1.0


def test_zero_margin_calibrates_near_half():
    X, labels = separable_fixture()
    model = svm_train(X, labels)
    pos = model.classes.index("pos")
    w, b = model.weights[pos], model.bias[pos]
    # a point exactly on the decision hyperplane
    x0 = np.zeros(2)
    x_on_plane = x0 - ((w @ x0 + b) / (w @ w)) * w
    assert abs(w @ x_on_plane + b) < 1e-9
    conf = calibrated_probability(model, x_on_plane)[0, pos]
    assert 0.4 < conf < 0.6


def test_duplicating_samples_leaves_decision_function_unchanged():
    X, labels = separable_fixture(seed=3)
    model_a = svm_train(X, labels)
    model_b = svm_train(np.vstack([X, X]), np.concatenate([labels, labels]))
    rng = np.random.default_rng(5)
    probes = rng.normal(scale=3.0, size=(200, 2))
    assert np.array_equal(svm_predict(model_a, probes), svm_predict(model_b, probes))
    assert np.allclose(model_a.weights, model_b.weights, atol=1e-12)


def test_training_loss_non_increasing_at_epoch_boundaries():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(80, 5))
    labels = np.where(X[:, 0] + 0.3 * rng.normal(size=80) > 0, "a", "b")
    history = svm_training_loss_history(X, labels, epochs=150)
    diffs = np.diff(history)
    assert (diffs <= 1e-12).all()


def test_single_class_rejected():
    X = np.zeros((5, 2))
    with pytest.raises(ValueError):
        svm_train(X, np.array(["only"] * 5))


def test_multiclass_one_vs_rest_predicts_all_classes():
    rng = np.random.default_rng(9)
    centers = {"a": (0, 0), "b": (6, 0), "c": (0, 6)}
    X = np.vstack([rng.normal(c, 0.5, size=(30, 2)) for c in centers.values()])
    labels = np.repeat(list(centers), 30)
    model = svm_train(X, labels)
    pred = svm_predict(model, X)
    assert (pred == labels).mean() > 0.95
    assert set(pred) == set(centers)


def test_class_weights_recorded_and_probabilities_bounded():
    X, labels = separable_fixture(seed=1, n=30)
    model = svm_train(X, labels, class_weights={"neg": 1.0, "pos": 2.0})
    assert model.class_weights == {"neg": 1.0, "pos": 2.0}
    p = calibrated_probability(model, X)
    assert (p > 0).all() and (p < 1).all()


def test_dimension_mismatch_rejected():
    X, labels = separable_fixture(seed=2, n=20)
    model = svm_train(X, labels)
    with pytest.raises(ValueError):
        svm_predict(model, np.zeros((3, 7)))
