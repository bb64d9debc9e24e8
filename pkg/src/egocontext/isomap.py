"""Isometric embedding: k-NN graph geodesics plus classical MDS.

Out-of-sample points are embedded with the Nystrom extension, routing their
geodesics through the new point's nearest training neighbors.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path
from scipy.spatial.distance import cdist


class DisconnectedGraphError(ValueError):
    """k-NN graph split into several components; raise k to connect them."""

    def __init__(self, component_sizes):
        self.component_sizes = sorted(component_sizes, reverse=True)
        super().__init__(
            f"k-NN graph is disconnected (component sizes {self.component_sizes}); "
            "increase k_neighbors"
        )


@dataclass
class IsomapModel:
    k_neighbors: int
    train_points: np.ndarray           # (N, d)
    train_embedding: np.ndarray        # (N, m)
    geodesic_sq_col_means: np.ndarray  # (N,)
    eigenvalues: np.ndarray            # (m,), positive
    eigenvectors: np.ndarray           # (N, m)
    residual_variance: float
    geodesics: np.ndarray              # (N, N), symmetric, zero diagonal

    @property
    def n_components(self) -> int:
        return self.train_embedding.shape[1]


def _knn_graph(X: np.ndarray, k: int) -> csr_matrix:
    """Symmetric k-NN graph: edge kept if either endpoint selects the other."""
    dists = cdist(X, X)
    n = X.shape[0]
    order = np.argsort(dists, axis=1, kind="stable")
    neighbors = order[:, 1: k + 1]  # skip self at distance 0
    rows = np.repeat(np.arange(n), k)
    cols = neighbors.ravel()
    vals = dists[rows, cols]
    g = csr_matrix((vals, (rows, cols)), shape=(n, n))
    return g.maximum(g.T)


def isomap_fit(X: np.ndarray, k: int, m: int) -> IsomapModel:
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n < k + 1:
        raise ValueError(f"need at least k+1={k + 1} samples, got {n}")
    if not 1 <= m <= n - 1:
        raise ValueError(f"m={m} out of range, expected 1..{n - 1}")

    graph = _knn_graph(X, k)
    n_comp, labels = connected_components(graph, directed=False)
    if n_comp > 1:
        raise DisconnectedGraphError(np.bincount(labels).tolist())

    geo = shortest_path(graph, method="D", directed=False)

    # classical MDS on squared geodesics
    sq = geo ** 2
    col_means = sq.mean(axis=0)
    grand = sq.mean()
    b = -0.5 * (sq - col_means[None, :] - col_means[:, None] + grand)
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1][:m]
    evals = evals[order]
    evecs = evecs[:, order]
    if evals[0] <= 0:
        raise ValueError("degenerate geometry: leading MDS eigenvalue is not positive")
    evals = np.maximum(evals, 0.0)

    # deterministic sign: largest-magnitude entry of each eigenvector positive
    flip = evecs[np.abs(evecs).argmax(axis=0), np.arange(evecs.shape[1])] < 0
    evecs = np.ascontiguousarray(np.where(flip[None, :], -evecs, evecs))

    # persisted models reload C-contiguous; keep the in-memory layout equal
    # so BLAS takes the same code path and transforms stay bit-identical
    embedding = np.ascontiguousarray(evecs * np.sqrt(evals)[None, :])
    residual = _residual_variance(geo, embedding)
    return IsomapModel(
        k_neighbors=k,
        train_points=X,
        train_embedding=embedding,
        geodesic_sq_col_means=col_means,
        eigenvalues=evals,
        eigenvectors=evecs,
        residual_variance=residual,
        geodesics=geo,
    )


def _residual_variance(geodesics: np.ndarray, embedding: np.ndarray) -> float:
    """1 - r^2 between geodesic and embedded pairwise distances."""
    iu = np.triu_indices(geodesics.shape[0], k=1)
    emb_d = cdist(embedding, embedding)[iu]
    r = np.corrcoef(geodesics[iu], emb_d)[0, 1]
    return float(np.clip(1.0 - r ** 2, 0.0, 1.0))


def isomap_transform(model: IsomapModel, x: np.ndarray) -> np.ndarray:
    """Nystrom out-of-sample embedding of one vector or a stack of vectors."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    if pts.shape[1] != model.train_points.shape[1]:
        raise ValueError(
            f"dimension mismatch: got {pts.shape[1]}, model has {model.train_points.shape[1]}"
        )

    dists = cdist(pts, model.train_points)
    k = model.k_neighbors
    out = np.empty((pts.shape[0], model.n_components))
    scale = 1.0 / (2.0 * np.sqrt(model.eigenvalues))
    for i in range(pts.shape[0]):
        nearest = np.argsort(dists[i], kind="stable")[:k]
        geo_x = np.min(dists[i, nearest][:, None] + model.geodesics[nearest], axis=0)
        out[i] = scale * (model.eigenvectors.T @ (model.geodesic_sq_col_means - geo_x ** 2))
    return out[0] if single else out
