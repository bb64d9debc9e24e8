"""Self-organizing map on a regular quadrangular grid.

Online training: per sample, the best matching unit (BMU) is found by
Euclidean distance and every neuron moves toward the sample under a
Gaussian neighborhood kernel on grid coordinates. Learning rate and kernel
width decay exponentially over the total number of sample presentations.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SomTrainConfig:
    epochs: int = 20
    lr_start: float = 0.5
    lr_end: float = 0.01
    sigma_start: float = None  # default max(grid_w, grid_h) / 2
    sigma_end: float = 0.5
    seed: int = 42

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "lr_start": self.lr_start,
            "lr_end": self.lr_end,
            "sigma_start": self.sigma_start,
            "sigma_end": self.sigma_end,
            "seed": self.seed,
        }


@dataclass
class SomGrid:
    grid_w: int
    grid_h: int
    codebook: np.ndarray  # (grid_w * grid_h, d), neuron (row, col) at row * grid_w + col
    train_config: SomTrainConfig = field(default_factory=SomTrainConfig)

    @property
    def n_neurons(self) -> int:
        return self.grid_w * self.grid_h

    @property
    def dim(self) -> int:
        return self.codebook.shape[1]

    def coords(self) -> np.ndarray:
        """(n_neurons, 2) array of (row, col) grid coordinates, row-major."""
        rows, cols = np.divmod(np.arange(self.n_neurons), self.grid_w)
        return np.stack([rows, cols], axis=1)


@dataclass(frozen=True)
class TcqReport:
    tcq: float
    Q: int
    hits: int


def som_initial_codebook(X: np.ndarray, grid_w: int, grid_h: int, seed: int) -> np.ndarray:
    """Seeded sample of training rows, one per neuron (with replacement)."""
    X = np.asarray(X, dtype=np.float64)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, X.shape[0], size=grid_w * grid_h)
    return X[idx].copy()


def _schedule(start: float, end: float, total_steps: int) -> np.ndarray:
    """Exponential decay from start to end over total_steps values."""
    if total_steps == 1:
        return np.array([start])
    t = np.arange(total_steps) / (total_steps - 1)
    return start * (end / start) ** t


def som_fit(X: np.ndarray, grid_w: int, grid_h: int, config: SomTrainConfig = None) -> SomGrid:
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] == 0:
        raise ValueError("som_fit needs at least one sample")
    if grid_w * grid_h < 2:
        raise ValueError("grid must have at least 2 neurons")
    config = config or SomTrainConfig()

    sigma_start = config.sigma_start
    if sigma_start is None:
        sigma_start = max(grid_w, grid_h) / 2.0

    codebook = som_initial_codebook(X, grid_w, grid_h, config.seed)
    grid = SomGrid(grid_w=grid_w, grid_h=grid_h, codebook=codebook, train_config=config)
    coords = grid.coords().astype(np.float64)

    n = X.shape[0]
    total = config.epochs * n
    lr = _schedule(config.lr_start, config.lr_end, total)
    sigma = _schedule(sigma_start, config.sigma_end, total)

    rng = np.random.default_rng(config.seed)
    step = 0
    for _ in range(config.epochs):
        for i in rng.permutation(n):
            x = X[i]
            bmu = int(np.argmin(((codebook - x) ** 2).sum(axis=1)))
            grid_sq = ((coords - coords[bmu]) ** 2).sum(axis=1)
            h = lr[step] * np.exp(-grid_sq / (2.0 * sigma[step] ** 2))
            codebook += h[:, None] * (x - codebook)
            step += 1
    return grid


def som_bmu(grid: SomGrid, x: np.ndarray) -> int:
    """Index of the nearest neuron; ties resolve to the lowest row-major index."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != grid.dim:
        raise ValueError(f"dimension mismatch: got {x.shape[0]}, grid has {grid.dim}")
    return int(np.argmin(((grid.codebook - x) ** 2).sum(axis=1)))


def som_bmu_k(grid: SomGrid, x: np.ndarray, k: int) -> np.ndarray:
    """The k nearest neurons, ascending by distance, ties by lowest index."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != grid.dim:
        raise ValueError(f"dimension mismatch: got {x.shape[0]}, grid has {grid.dim}")
    if not 1 <= k <= grid.n_neurons:
        raise ValueError(f"k={k} out of range, grid has {grid.n_neurons} neurons")
    d2 = ((grid.codebook - x) ** 2).sum(axis=1)
    return np.argsort(d2, kind="stable")[:k]


def quantization_error(grid: SomGrid, X: np.ndarray) -> float:
    """Mean distance from each sample to its BMU weight vector."""
    X = np.asarray(X, dtype=np.float64)
    d2 = ((X[:, None, :] - grid.codebook[None, :, :]) ** 2).sum(axis=2)
    return float(np.sqrt(d2.min(axis=1)).mean())


def tcq(grid: SomGrid, X: np.ndarray) -> TcqReport:
    """Fraction of samples whose two nearest neurons share a grid edge.

    Contiguity is the 4-neighborhood; a neuron is never contiguous with
    itself. Exact distance ties resolve to the two lowest-index minima.
    """
    X = np.asarray(X, dtype=np.float64)
    if grid.n_neurons < 2:
        raise ValueError("tcq needs a grid with at least 2 neurons")
    if X.shape[1] != grid.dim:
        raise ValueError(f"dimension mismatch: got {X.shape[1]}, grid has {grid.dim}")
    coords = grid.coords()
    hits = 0
    for x in X:
        d2 = ((grid.codebook - x) ** 2).sum(axis=1)
        first, second = np.argsort(d2, kind="stable")[:2]
        if np.abs(coords[first] - coords[second]).sum() == 1:
            hits += 1
    q = X.shape[0]
    return TcqReport(tcq=hits / q, Q=q, hits=hits)
