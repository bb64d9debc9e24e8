"""Linear projection onto principal directions, with out-of-sample transform."""

from dataclasses import dataclass

import numpy as np


@dataclass
class PcaModel:
    mean: np.ndarray         # (d,)
    components: np.ndarray   # (m, d), rows orthonormal
    eigenvalues: np.ndarray  # (m,), non-increasing

    @property
    def n_components(self) -> int:
        return self.components.shape[0]


def pca_fit(X: np.ndarray, m: int) -> PcaModel:
    """Top-m principal directions of mean-centered X.

    Sign convention: each component's largest-magnitude entry is positive,
    so fits are reproducible across eigensolvers.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if n < 2:
        raise ValueError("pca_fit needs at least 2 samples")
    if not 1 <= m <= min(n - 1, d):
        raise ValueError(f"m={m} out of range, expected 1..{min(n - 1, d)}")

    mean = X.mean(axis=0)
    centered = X - mean
    # SVD of the centered data; eigenvalues of the sample covariance are s^2/(n-1)
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:m]
    eigenvalues = (svals[:m] ** 2) / (n - 1)

    flip = components[np.arange(m), np.abs(components).argmax(axis=1)] < 0
    # contiguous copy: reloaded models must transform bit-identically
    components = np.ascontiguousarray(np.where(flip[:, None], -components, components))
    return PcaModel(mean=mean, components=components, eigenvalues=eigenvalues)


def pca_transform(model: PcaModel, x: np.ndarray) -> np.ndarray:
    """Project one vector or a stack of vectors onto the fitted directions."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.mean.shape[0]:
        raise ValueError(f"dimension mismatch: got {x.shape[-1]}, model has {model.mean.shape[0]}")
    return (x - model.mean) @ model.components.T


def pca_reconstruct(model: PcaModel, y: np.ndarray) -> np.ndarray:
    return y @ model.components + model.mean
