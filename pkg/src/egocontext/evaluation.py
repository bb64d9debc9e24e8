"""Post-learning evaluation: majority-vote classifiers over manifold outputs
and accuracy/confusion reporting.

Voting never invents labels: predictions always come from training labels.
Vote ties resolve to the label of the single nearest training sample among
the tied classes, so results are deterministic.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .som import SomGrid, som_bmu


def _break_tie(tied_labels, candidate_labels, candidate_dists):
    order = np.argsort(candidate_dists, kind="stable")
    for idx in order:
        if candidate_labels[idx] in tied_labels:
            return candidate_labels[idx]
    raise RuntimeError("tie break failed: no candidate carries a tied label")


def knn_majority_vote(train_embedding, train_labels, x, k=10):
    """Mode of the k nearest training labels in the embedding space."""
    train_embedding = np.asarray(train_embedding, dtype=np.float64)
    train_labels = np.asarray(train_labels)
    if train_embedding.shape[0] == 0:
        raise ValueError("empty training set")
    if k > train_embedding.shape[0]:
        raise ValueError(f"k={k} exceeds training size {train_embedding.shape[0]}")
    d = np.linalg.norm(train_embedding - np.asarray(x, dtype=np.float64), axis=1)
    nearest = np.argsort(d, kind="stable")[:k]
    counts = Counter(train_labels[nearest].tolist())
    top = max(counts.values())
    tied = {label for label, c in counts.items() if c == top}
    if len(tied) == 1:
        return tied.pop()
    return _break_tie(tied, train_labels[nearest], d[nearest])


@dataclass
class SomVoter:
    """Per-neuron training activations of a fitted SOM, ready to vote."""

    grid: SomGrid
    neuron_rows: list          # per neuron: indices of training rows with that BMU
    train_data: np.ndarray
    train_labels: np.ndarray

    def label_counts(self, neuron: int) -> dict:
        return dict(Counter(self.train_labels[self.neuron_rows[neuron]].tolist()))


def som_assignments(grid: SomGrid, train_data, train_labels) -> SomVoter:
    train_data = np.asarray(train_data, dtype=np.float64)
    train_labels = np.asarray(train_labels)
    rows = [[] for _ in range(grid.n_neurons)]
    for i, x in enumerate(train_data):
        rows[som_bmu(grid, x)].append(i)
    return SomVoter(
        grid=grid,
        neuron_rows=[np.array(r, dtype=np.int64) for r in rows],
        train_data=train_data,
        train_labels=train_labels,
    )


def som_majority_vote(voter: SomVoter, x):
    """Mode of training labels that activated BMU(x).

    Empty neurons fall back to the nearest hit-bearing neuron, by grid
    distance then codebook distance to x.
    """
    grid = voter.grid
    x = np.asarray(x, dtype=np.float64)
    neuron = som_bmu(grid, x)
    if voter.neuron_rows[neuron].shape[0] == 0:
        neuron = _nearest_hit_neuron(voter, neuron, x)
    rows = voter.neuron_rows[neuron]
    counts = Counter(voter.train_labels[rows].tolist())
    top = max(counts.values())
    tied = {label for label, c in counts.items() if c == top}
    if len(tied) == 1:
        return tied.pop()
    dists = np.linalg.norm(voter.train_data[rows] - x, axis=1)
    return _break_tie(tied, voter.train_labels[rows], dists)


def _nearest_hit_neuron(voter: SomVoter, neuron: int, x: np.ndarray) -> int:
    grid = voter.grid
    hit = [n for n in range(grid.n_neurons) if voter.neuron_rows[n].shape[0] > 0]
    if not hit:
        raise ValueError("no neuron has any training activation")
    coords = grid.coords()
    grid_d = np.linalg.norm(coords[hit] - coords[neuron], axis=1)
    code_d = np.linalg.norm(grid.codebook[hit] - x, axis=1)
    order = sorted(range(len(hit)), key=lambda i: (grid_d[i], code_d[i], hit[i]))
    return hit[order[0]]


@dataclass
class EvalReport:
    accuracy: float
    labels: list                    # confusion row/column order
    confusion: np.ndarray           # (L, L) row percentages
    support: np.ndarray             # (L,) true-label counts
    zero_support: list = field(default_factory=list)

    def row_sums(self) -> np.ndarray:
        return self.confusion.sum(axis=1)


def evaluate_classifier(predict_fn, test_data, test_labels, label_order=None) -> EvalReport:
    """Accuracy plus a row-normalized percentage confusion matrix.

    Rows are true labels; rows with zero support stay all-zero and are
    listed in zero_support.
    """
    test_data = np.asarray(test_data, dtype=np.float64)
    test_labels = np.asarray(test_labels)
    if test_labels.shape[0] == 0:
        raise ValueError("empty test split")
    predictions = np.asarray([predict_fn(x) for x in test_data])

    labels = list(label_order) if label_order else sorted(set(test_labels) | set(predictions))
    index = {l: i for i, l in enumerate(labels)}
    n = len(labels)
    counts = np.zeros((n, n))
    for truth, pred in zip(test_labels, predictions):
        counts[index[truth], index[pred]] += 1
    support = counts.sum(axis=1)
    confusion = np.zeros_like(counts)
    nonzero = support > 0
    confusion[nonzero] = counts[nonzero] / support[nonzero, None] * 100.0
    return EvalReport(
        accuracy=float((predictions == test_labels).mean()),
        labels=labels,
        confusion=confusion,
        support=support.astype(np.int64),
        zero_support=[l for l, s in zip(labels, support) if s == 0],
    )


def binary_rates(truth: np.ndarray, predicted: np.ndarray, positive) -> dict:
    """TPR, TNR, precision, F1 and the raw counts, positive class fixed."""
    truth = np.asarray(truth)
    predicted = np.asarray(predicted)
    tp = int(np.sum((truth == positive) & (predicted == positive)))
    fn = int(np.sum((truth == positive) & (predicted != positive)))
    tn = int(np.sum((truth != positive) & (predicted != positive)))
    fp = int(np.sum((truth != positive) & (predicted == positive)))
    tpr = tp / (tp + fn) if tp + fn else 0.0
    tnr = tn / (tn + fp) if tn + fp else 0.0
    precision = tp / (tp + fp) if tp + fp else 0.0
    f1 = 2 * precision * tpr / (precision + tpr) if precision + tpr else 0.0
    return {
        "tp": tp, "fn": fn, "tn": tn, "fp": fp,
        "tpr": tpr, "tnr": tnr, "precision": precision, "f1": f1,
    }
