import numpy as np
import pytest

from egocontext.pca import pca_fit, pca_reconstruct, pca_transform


def brute_force_projection(X, m):
    """Oracle: eigendecomposition of the explicit sample covariance matrix."""
    mean = X.mean(axis=0)
    cov = np.cov(X, rowvar=False, ddof=1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:m]
    return (X - mean) @ evecs[:, order], evals[order]


def test_identical_rows_give_zero_variance():
    X = np.tile(np.array([3.0, -1.0, 2.0]), (5, 1))
    model = pca_fit(X, 2)
    assert np.allclose(model.eigenvalues, 0.0, atol=1e-12)
    assert np.allclose(pca_transform(model, X), 0.0, atol=1e-9)


def test_line_y_equals_x():
    t = np.linspace(-2, 2, 30)
    X = np.stack([t, t], axis=1)
    model = pca_fit(X, 2)
    assert np.allclose(np.abs(model.components[0]), [1 / np.sqrt(2)] * 2, atol=1e-9)
    assert model.eigenvalues[1] <= 1e-9


def test_matches_covariance_eigendecomposition_oracle():
    rng = np.random.default_rng(42)
    X = rng.normal(size=(50, 10)) @ np.diag(np.linspace(3, 0.5, 10))
    model = pca_fit(X, 5)
    ours = pca_transform(model, X)
    expected, evals = brute_force_projection(X, 5)
    for a in range(5):
        col = ours[:, a]
        ref = expected[:, a]
        assert min(np.abs(col - ref).max(), np.abs(col + ref).max()) < 1e-6
    assert np.allclose(model.eigenvalues, evals, atol=1e-8)


def test_transform_of_mean_and_component():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(20, 6))
    model = pca_fit(X, 3)
    assert np.allclose(pca_transform(model, model.mean), 0.0, atol=1e-12)
    y = pca_transform(model, model.mean + model.components[0])
    assert np.allclose(y, [1.0, 0.0, 0.0], atol=1e-9)


def test_fit_transform_consistency_on_training_rows():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(15, 4))
    model = pca_fit(X, 2)
    emb = pca_transform(model, X)
    for i in range(15):
        assert np.allclose(pca_transform(model, X[i]), emb[i], atol=1e-9)


def test_full_rank_reconstruction_exact():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(30, 5))
    model = pca_fit(X, 5)
    rec = pca_reconstruct(model, pca_transform(model, X))
    rel = np.abs(rec - X).max() / np.abs(X).max()
    assert rel < 1e-6


def test_component_orthonormality_and_ordering():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(40, 8))
    model = pca_fit(X, 6)
    gram = model.components @ model.components.T
    assert np.allclose(gram, np.eye(6), atol=1e-8)
    assert (np.diff(model.eigenvalues) <= 1e-12).all()


def test_m_out_of_range_rejected():
    X = np.random.default_rng(4).normal(size=(10, 3))
    for bad in (0, 4, 10):
        with pytest.raises(ValueError):
            pca_fit(X, bad)
    with pytest.raises(ValueError):
        pca_transform(pca_fit(X, 2), np.zeros(5))
