"""Unsupervised hyperparameter sweeps and knee picking.

Isomap neighbor counts are scored by embedding reconstruction quality
(residual variance, lower is better); SOM grid sizes are scored by
topological conservation (TCQ, higher is better). The knee rule turns the
eyeball notion of a curve "stabilizing" into a reproducible choice.
"""

from dataclasses import dataclass, field

import numpy as np

from .isomap import DisconnectedGraphError, isomap_fit
from .som import SomTrainConfig, som_fit, tcq

RESIDUAL_VARIANCE = "RESIDUAL_VARIANCE"
TCQ = "TCQ"

# relative change per step below this counts as stable
_KNEE_THRESHOLD = 0.02
_KNEE_LOOKAHEAD = 2


@dataclass
class SweepCurve:
    parameter_values: list
    scores: list
    metric: str
    flags: list = field(default_factory=list)  # per-point notes, e.g. "disconnected"

    def __post_init__(self):
        if len(self.parameter_values) != len(self.scores):
            raise ValueError("parameter_values and scores must have equal length")
        if any(b <= a for a, b in zip(self.parameter_values, self.parameter_values[1:])):
            raise ValueError("parameter_values must be strictly ascending")
        if not self.flags:
            self.flags = [""] * len(self.scores)


def sweep_isomap_neighbors(X: np.ndarray, k_values, m: int) -> SweepCurve:
    """Residual variance of one isomap fit per neighbor count.

    Disconnected fits score 1.0 and carry a "disconnected" flag instead of
    silently repairing the graph.
    """
    k_values = sorted(k_values)
    if not k_values:
        raise ValueError("k_values must be non-empty")
    scores, flags = [], []
    for k in k_values:
        try:
            scores.append(isomap_fit(X, k, m).residual_variance)
            flags.append("")
        except DisconnectedGraphError as exc:
            scores.append(1.0)
            flags.append(f"disconnected:{','.join(map(str, exc.component_sizes))}")
    return SweepCurve(k_values, scores, RESIDUAL_VARIANCE, flags)


def sweep_som_sizes(X: np.ndarray, sizes, config: SomTrainConfig = None) -> SweepCurve:
    """TCQ of one square-grid SOM fit per size, identical seed and schedule."""
    sizes = sorted(sizes)
    if not sizes:
        raise ValueError("sizes must be non-empty")
    config = config or SomTrainConfig()
    scores = []
    for s in sizes:
        grid = som_fit(X, s, s, config)
        scores.append(tcq(grid, X).tcq)
    return SweepCurve(sizes, scores, TCQ)


def pick_knee(curve: SweepCurve) -> int:
    """Smallest parameter whose next two relative score changes are below 2%.

    Falls back to the best-scoring parameter (metric-aware direction) when
    the curve never stabilizes.
    """
    scores = np.asarray(curve.scores, dtype=np.float64)
    n = scores.shape[0]
    if n < 3:
        raise ValueError("pick_knee needs a curve of length >= 3")
    for i in range(n - _KNEE_LOOKAHEAD):
        stable = True
        for j in range(i, i + _KNEE_LOOKAHEAD):
            denom = max(abs(scores[j]), 1e-12)
            if abs(scores[j + 1] - scores[j]) / denom >= _KNEE_THRESHOLD:
                stable = False
                break
        if stable:
            return curve.parameter_values[i]
    best = int(np.argmax(scores)) if curve.metric == TCQ else int(np.argmin(scores))
    return curve.parameter_values[best]
