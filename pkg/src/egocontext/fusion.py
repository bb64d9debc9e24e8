"""Importance-ranked feature fusion.

A random forest ranks every dimension of the concatenated descriptor; the
fused feature grows one ranked dimension at a time while each evaluator is
refit on the prefix and scored on the test split. The per-family makeup of
each prefix comes from the concatenation provenance table.
"""

from dataclasses import dataclass

import numpy as np

from .evaluation import som_assignments, som_majority_vote
from .forest import rf_predict, rf_train
from .som import SomTrainConfig, som_fit


@dataclass
class FusionStep:
    dims_used: int
    evaluator_scores: dict   # evaluator name -> test accuracy
    family_counts: dict      # descriptor_id -> dimensions used so far


@dataclass
class FusionTrace:
    ranking: np.ndarray      # permutation of concat dimension indices
    steps: list              # FusionStep, ascending dims_used


def rank_dimensions(concat_train, labels, n_trees=100, seed=42) -> np.ndarray:
    """Concat dimensions sorted by forest importance, descending.

    Ties resolve to the lower index so reruns are reproducible.
    """
    model = rf_train(concat_train, labels, n_trees=n_trees, seed=seed)
    return np.argsort(-model.importances, kind="stable")


def som_vote_evaluator(grid_size=30, config: SomTrainConfig = None):
    """Evaluator: fit a square SOM on the prefix, classify by neuron vote."""
    config = config or SomTrainConfig()

    def fit_predict(train_X, train_labels, test_X):
        grid = som_fit(train_X, grid_size, grid_size, config)
        voter = som_assignments(grid, train_X, train_labels)
        return np.array([som_majority_vote(voter, x) for x in test_X])

    return fit_predict


def rf_evaluator(n_trees=100, seed=42):
    def fit_predict(train_X, train_labels, test_X):
        model = rf_train(train_X, train_labels, n_trees=n_trees, seed=seed)
        return rf_predict(model, test_X)

    return fit_predict


def stepwise_curve(
    ranking,
    train_X,
    train_labels,
    test_X,
    test_labels,
    evaluators: dict,
    provenance: list,
    step: int = 1,
    max_dims: int = 60,
) -> FusionTrace:
    """Refit every evaluator on growing importance-ranked prefixes.

    Prefix sizes run 1, 1+step, ... up to max_dims. Scores are plain test
    accuracies; family_counts tallies the provenance family of every
    dimension inside the prefix.
    """
    ranking = np.asarray(ranking, dtype=np.int64)
    train_X = np.asarray(train_X, dtype=np.float64)
    test_X = np.asarray(test_X, dtype=np.float64)
    train_labels = np.asarray(train_labels)
    test_labels = np.asarray(test_labels)
    if max_dims > ranking.shape[0]:
        raise ValueError(f"max_dims={max_dims} exceeds ranked dimensions {ranking.shape[0]}")

    steps = []
    for dims_used in range(1, max_dims + 1, step):
        prefix = ranking[:dims_used]
        # columns are presented in their original order so a full prefix is
        # exactly the raw concatenated matrix
        cols = np.sort(prefix)
        scores = {}
        for name, evaluator in evaluators.items():
            pred = evaluator(train_X[:, cols], train_labels, test_X[:, cols])
            scores[name] = float((pred == test_labels).mean())
        counts = {}
        for d in prefix:
            family = provenance[d][0]
            counts[family] = counts.get(family, 0) + 1
        steps.append(FusionStep(dims_used=dims_used, evaluator_scores=scores, family_counts=counts))
    return FusionTrace(ranking=ranking, steps=steps)
