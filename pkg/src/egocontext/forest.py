"""Random forest classifier with Gini impurity and per-dimension importances.

Trees are grown on bootstrap samples with sqrt(d) candidate features per
split, to purity (splits of fewer than 2 samples are leaves). Importances
accumulate sample-weighted impurity decrease per feature across all trees
and normalize to a probability vector.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class TreeNodes:
    """Flat node arrays of one decision tree (-1 feature marks a leaf)."""

    feature: np.ndarray    # (nodes,) int
    threshold: np.ndarray  # (nodes,) float
    left: np.ndarray       # (nodes,) int child index
    right: np.ndarray      # (nodes,) int child index
    value: np.ndarray      # (nodes,) int class index of majority


@dataclass
class ForestModel:
    classes: list
    trees: list                        # list[TreeNodes]
    n_trees: int
    max_features: str
    importances: np.ndarray            # (d,), non-negative, sums to 1
    seed: int = 42
    min_samples_split: int = 2
    dim: int = field(default=0)


def gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.sum(p * p))


class _TreeBuilder:
    def __init__(self, X, y, n_classes, rng, min_samples_split):
        self.X = X
        self.y = y
        self.n_classes = n_classes
        self.rng = rng
        self.min_split = min_samples_split
        self.n_features = X.shape[1]
        self.k = max(1, int(np.sqrt(self.n_features)))
        self.nodes = []
        self.importance = np.zeros(self.n_features)

    def build(self, idx):
        self._grow(idx)
        return TreeNodes(
            feature=np.array([n[0] for n in self.nodes], dtype=np.int64),
            threshold=np.array([n[1] for n in self.nodes]),
            left=np.array([n[2] for n in self.nodes], dtype=np.int64),
            right=np.array([n[3] for n in self.nodes], dtype=np.int64),
            value=np.array([n[4] for n in self.nodes], dtype=np.int64),
        )

    def _grow(self, idx):
        node_id = len(self.nodes)
        counts = np.bincount(self.y[idx], minlength=self.n_classes)
        majority = int(counts.argmax())
        impurity = gini(counts)
        if idx.shape[0] < self.min_split or impurity == 0.0:
            self.nodes.append([-1, 0.0, -1, -1, majority])
            return node_id

        split = self._best_split(idx, counts, impurity)
        if split is None:
            self.nodes.append([-1, 0.0, -1, -1, majority])
            return node_id

        feat, thr, decrease = split
        self.nodes.append([feat, thr, -1, -1, majority])
        self.importance[feat] += idx.shape[0] * decrease
        mask = self.X[idx, feat] <= thr
        left = self._grow(idx[mask])
        right = self._grow(idx[~mask])
        self.nodes[node_id][2] = left
        self.nodes[node_id][3] = right
        return node_id

    def _best_split(self, idx, counts, impurity):
        n = idx.shape[0]
        features = np.sort(self.rng.choice(self.n_features, size=self.k, replace=False))
        best = None
        for feat in features:
            vals = self.X[idx, feat]
            order = np.argsort(vals, kind="stable")
            sv = vals[order]
            sy = self.y[idx][order]
            boundaries = np.nonzero(sv[1:] > sv[:-1])[0]
            if boundaries.shape[0] == 0:
                continue
            onehot = np.zeros((n, self.n_classes))
            onehot[np.arange(n), sy] = 1.0
            cum = onehot.cumsum(axis=0)
            left_counts = cum[boundaries]
            right_counts = counts[None, :] - left_counts
            nl = left_counts.sum(axis=1)
            nr = n - nl
            gl = 1.0 - np.sum((left_counts / nl[:, None]) ** 2, axis=1)
            gr = 1.0 - np.sum((right_counts / nr[:, None]) ** 2, axis=1)
            decrease = impurity - (nl * gl + nr * gr) / n
            j = int(decrease.argmax())
            if decrease[j] > 1e-12 and (best is None or decrease[j] > best[2] + 1e-15):
                thr = (sv[boundaries[j]] + sv[boundaries[j] + 1]) / 2.0
                best = (int(feat), float(thr), float(decrease[j]))
        return best


def rf_train(X, labels, n_trees=100, seed=42, min_samples_split=2) -> ForestModel:
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    if len(classes) < 2:
        raise ValueError("rf_train needs at least 2 classes")
    class_index = {c: i for i, c in enumerate(classes)}
    y = np.array([class_index[l] for l in labels], dtype=np.int64)

    n = X.shape[0]
    importance = np.zeros(X.shape[1])
    trees = []
    children = np.random.SeedSequence(seed).spawn(n_trees)
    for ss in children:
        rng = np.random.default_rng(ss)
        boot = rng.integers(0, n, size=n)
        builder = _TreeBuilder(X, y, len(classes), rng, min_samples_split)
        trees.append(builder.build(boot))
        importance += builder.importance
    total = importance.sum()
    if total > 0:
        importance /= total
    return ForestModel(
        classes=classes,
        trees=trees,
        n_trees=n_trees,
        max_features="sqrt",
        importances=importance,
        seed=seed,
        min_samples_split=min_samples_split,
        dim=X.shape[1],
    )


def _tree_predict(tree: TreeNodes, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0], dtype=np.int64)
    for i, x in enumerate(X):
        node = 0
        while tree.feature[node] >= 0:
            node = tree.left[node] if x[tree.feature[node]] <= tree.threshold[node] else tree.right[node]
        out[i] = tree.value[node]
    return out


def rf_predict(model: ForestModel, X) -> np.ndarray:
    """Majority vote over trees; ties resolve to the smallest class."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.dim:
        raise ValueError(f"dimension mismatch: got {X.shape[1]}, model has {model.dim}")
    votes = np.zeros((X.shape[0], len(model.classes)), dtype=np.int64)
    for tree in model.trees:
        pred = _tree_predict(tree, X)
        votes[np.arange(X.shape[0]), pred] += 1
    return np.array([model.classes[i] for i in votes.argmax(axis=1)])


def rf_importances(model: ForestModel) -> np.ndarray:
    return model.importances
