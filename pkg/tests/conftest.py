import numpy as np
import pytest


def plane_points(n_x=40, n_y=5, jitter=0.3, ambient=10, seed=42):
    """Points on a 2-D affine plane inside a higher-dimensional space.

    A jittered lattice strip keeps k-NN graph paths close to straight lines,
    so geodesics track the true plane distances tightly.
    """
    rng = np.random.default_rng(seed)
    gx, gy = np.meshgrid(np.arange(n_x, dtype=float), np.arange(n_y, dtype=float))
    latent = np.stack([gx.ravel(), gy.ravel()], axis=1)
    latent += rng.uniform(-jitter, jitter, size=latent.shape)
    latent /= 10.0
    basis, _ = np.linalg.qr(rng.normal(size=(ambient, 2)))
    offset = rng.normal(size=ambient)
    return latent @ basis.T + offset, latent


def swiss_roll(n=800, seed=42, height=10.0):
    rng = np.random.default_rng(seed)
    t = rng.uniform(1.5 * np.pi, 4.5 * np.pi, size=n)
    y = rng.uniform(0, height, size=n)
    return np.stack([t * np.cos(t), y, t * np.sin(t)], axis=1), t


def three_gaussians(n_per=100, std=1.5, seed=5):
    rng = np.random.default_rng(seed)
    means = np.array([[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]])
    return np.vstack([rng.normal(m, std, size=(n_per, 2)) for m in means])


def smooth_sequence(n=300, dim=12, seed=42, noise=0.01):
    """Temporally smooth trajectory: a slow 1-D latent walk lifted to `dim`."""
    rng = np.random.default_rng(seed)
    t = np.cumsum(np.abs(rng.normal(scale=0.05, size=n)))
    freqs = np.linspace(0.5, 2.0, dim)
    phases = rng.uniform(0, 2 * np.pi, size=dim)
    X = np.sin(np.outer(t, freqs) + phases)
    return X + rng.normal(scale=noise, size=X.shape)


@pytest.fixture(scope="session")
def plane_fixture():
    return plane_points()


@pytest.fixture(scope="session")
def swiss_roll_fixture():
    return swiss_roll()


@pytest.fixture(scope="session")
def smooth_sequence_fixture():
    return smooth_sequence()
