import numpy as np
import pytest

from egocontext.som import (
    SomGrid,
    SomTrainConfig,
    quantization_error,
    som_bmu,
    som_bmu_k,
    som_fit,
    som_initial_codebook,
    tcq,
)
from tests.conftest import smooth_sequence, three_gaussians


def test_single_sample_attractor():
    x = np.array([[2.0, -3.0, 0.5]])
    grid = som_fit(x, 3, 3, SomTrainConfig(seed=1))
    bmu = som_bmu(grid, x[0])
    assert np.abs(grid.codebook[bmu] - x[0]).max() < 1e-3


def test_two_clusters_on_1x2_grid():
    rng = np.random.default_rng(3)
    std = 0.2
    a = rng.normal(loc=(0.0, 0.0), scale=std, size=(40, 2))
    b = rng.normal(loc=(6.0, 6.0), scale=std, size=(40, 2))
    X = np.vstack([a, b])
    # shrink the end-of-training neighborhood so the two neurons decouple
    grid = som_fit(X, 2, 1, SomTrainConfig(seed=5, sigma_end=0.2, epochs=30))
    means = np.array([a.mean(axis=0), b.mean(axis=0)])
    # each neuron near one cluster mean, and both clusters covered
    owners = []
    for w in grid.codebook:
        d = np.linalg.norm(means - w, axis=1)
        owners.append(int(d.argmin()))
        assert d.min() < 3 * std
    assert sorted(owners) == [0, 1]


def test_training_reduces_quantization_error():
    X = three_gaussians()
    cfg = SomTrainConfig(seed=5)
    init = som_initial_codebook(X, 5, 5, cfg.seed)
    before = quantization_error(SomGrid(5, 5, init, cfg), X)
    after = quantization_error(som_fit(X, 5, 5, cfg), X)
    assert after < before


def test_fit_bit_reproducible():
    X = smooth_sequence(n=80, dim=6, seed=7)
    a = som_fit(X, 4, 4, SomTrainConfig(seed=9))
    b = som_fit(X, 4, 4, SomTrainConfig(seed=9))
    assert np.array_equal(a.codebook, b.codebook)


def test_codebook_rows_are_their_own_bmu():
    X = smooth_sequence(n=120, dim=5, seed=13)
    grid = som_fit(X, 4, 3, SomTrainConfig(seed=13))
    for j in range(grid.n_neurons):
        assert som_bmu(grid, grid.codebook[j]) == j


def test_bmu_k_basic_contracts():
    X = smooth_sequence(n=60, dim=4, seed=17)
    grid = som_fit(X, 3, 3, SomTrainConfig(seed=17))
    j = 4
    assert som_bmu_k(grid, grid.codebook[j], 1)[0] == j
    full = som_bmu_k(grid, X[0], grid.n_neurons)
    assert sorted(full.tolist()) == list(range(grid.n_neurons))
    with pytest.raises(ValueError):
        som_bmu_k(grid, X[0], 0)
    with pytest.raises(ValueError):
        som_bmu_k(grid, np.zeros(99), 1)


def test_bmu_k_matches_exhaustive_oracle():
    rng = np.random.default_rng(23)
    grid = som_fit(rng.normal(size=(50, 6)), 4, 4, SomTrainConfig(seed=23))
    for x in rng.normal(size=(20, 6)):
        # oracle: full sorted distance list computed separately
        dists = np.array([np.linalg.norm(x - w) for w in grid.codebook])
        expected = sorted(range(16), key=lambda i: (dists[i], i))[:5]
        assert som_bmu_k(grid, x, 5).tolist() == expected


def test_tcq_1x2_grid_always_one():
    rng = np.random.default_rng(1)
    grid = SomGrid(2, 1, rng.normal(size=(2, 3)), SomTrainConfig())
    report = tcq(grid, rng.normal(size=(25, 3)))
    assert report.tcq == 1.0
    assert report.hits == report.Q == 25


def test_tcq_diagonal_2x2_zero():
    # codebook placed so the two nearest neurons of every sample are the
    # diagonal pair (0, 3): neurons 1 and 2 are pushed far away
    codebook = np.array([[0.0, 0.0], [100.0, 100.0], [-100.0, 100.0], [0.5, 0.0]])
    grid = SomGrid(2, 2, codebook, SomTrainConfig())
    X = np.array([[0.1, 0.0], [0.3, 0.05], [0.2, -0.02]])
    report = tcq(grid, X)
    assert report.tcq == 0.0 and report.hits == 0


def test_tcq_exact_ratio_and_permutation_invariance():
    rng = np.random.default_rng(31)
    grid = som_fit(rng.normal(size=(40, 4)), 3, 3, SomTrainConfig(seed=31))
    X = rng.normal(size=(37, 4))
    report = tcq(grid, X)
    assert report.tcq == report.hits / report.Q
    shuffled = X[rng.permutation(37)]
    assert tcq(grid, shuffled).tcq == report.tcq


def test_trained_tcq_beats_initial_on_smooth_sequence():
    X = smooth_sequence(n=300, dim=12, seed=42)
    cfg = SomTrainConfig(seed=42)
    init = SomGrid(6, 6, som_initial_codebook(X, 6, 6, cfg.seed), cfg)
    trained = som_fit(X, 6, 6, cfg)
    assert tcq(trained, X).tcq > tcq(init, X).tcq


def test_empty_fit_rejected():
    with pytest.raises(ValueError):
        som_fit(np.zeros((0, 3)), 2, 2)
