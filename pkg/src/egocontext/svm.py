"""Linear max-margin classifiers with calibrated confidences.

One hyperplane per class (one-vs-rest), trained by full-batch subgradient
descent on the L2-regularized hinge loss with per-sample class weights.
A backtracking step size keeps the objective non-increasing across epochs,
so training is deterministic and duplicating the dataset leaves the learned
decision function unchanged. Margins are mapped to probabilities with a
logistic fit on the training margins.
"""

from dataclasses import dataclass

import numpy as np

_BACKTRACK_LIMIT = 40


@dataclass
class LinearSvmModel:
    classes: list                 # sorted label values
    weights: np.ndarray           # (n_classes, d)
    bias: np.ndarray              # (n_classes,)
    calibration: np.ndarray       # (n_classes, 2) logistic (a, b) per class
    class_weights: dict           # label -> training weight
    seed: int = 42

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def margins(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.dim:
            raise ValueError(f"dimension mismatch: got {X.shape[1]}, model has {self.dim}")
        return X @ self.weights.T + self.bias


def _hinge_objective(w, b, X, y, sw, lam):
    margins = X @ w + b
    hinge = np.maximum(0.0, 1.0 - y * margins)
    return 0.5 * lam * np.dot(w, w) + np.dot(sw, hinge)


def _train_binary(X, y, sample_weights, epochs, lam):
    """Subgradient descent with per-epoch backtracking on the step size.

    Returns the hyperplane and the per-epoch objective values; backtracking
    guarantees the history never increases.
    """
    sw = sample_weights / sample_weights.sum()
    w = np.zeros(X.shape[1])
    b = 0.0
    eta = 1.0
    history = [_hinge_objective(w, b, X, y, sw, lam)]
    for _ in range(epochs):
        violating = (y * (X @ w + b)) < 1.0
        coef = sw * y * violating
        grad_w = lam * w - coef @ X
        grad_b = -coef.sum()
        accepted = False
        for _ in range(_BACKTRACK_LIMIT):
            w_try = w - eta * grad_w
            b_try = b - eta * grad_b
            loss_try = _hinge_objective(w_try, b_try, X, y, sw, lam)
            if loss_try <= history[-1]:
                w, b = w_try, b_try
                history.append(loss_try)
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            history.append(history[-1])
    return w, b, history


def _fit_platt(margins, targets, iterations=100):
    """Logistic pair (a, b): P(positive | m) = 1 / (1 + exp(a * m + b)).

    Targets are smoothed to (N+1)/(N+2) and 1/(N+2) so the fit stays finite
    on separable margins.
    """
    a, b = -1.0, 0.0
    raw = targets.astype(np.float64)
    n_pos, n_neg = raw.sum(), (1.0 - raw).sum()
    t = np.where(raw > 0, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))
    for _ in range(iterations):
        z = a * margins + b
        p = 1.0 / (1.0 + np.exp(np.clip(z, -500, 500)))
        # gradient and Hessian of the negative log-likelihood in (a, b)
        r = p - t
        g = np.array([-(r * margins).sum(), -r.sum()])
        wdiag = p * (1.0 - p)
        h = np.array(
            [
                [(wdiag * margins * margins).sum(), (wdiag * margins).sum()],
                [(wdiag * margins).sum(), wdiag.sum()],
            ]
        ) + 1e-9 * np.eye(2)
        step = np.linalg.solve(h, g)
        a -= step[0]
        b -= step[1]
        if np.abs(step).max() < 1e-10:
            break
    return a, b


def calibrated_probability(model: LinearSvmModel, X: np.ndarray) -> np.ndarray:
    """(n, n_classes) calibrated per-class confidences in (0, 1)."""
    m = model.margins(X)
    z = model.calibration[:, 0][None, :] * m + model.calibration[:, 1][None, :]
    p = 1.0 / (1.0 + np.exp(np.clip(z, -500, 500)))
    return np.clip(p, 1e-12, 1.0 - 1e-12)


def svm_train(X, labels, class_weights=None, epochs=200, lam=1e-3, seed=42) -> LinearSvmModel:
    """One-vs-rest linear SVMs with logistic calibration.

    class_weights maps labels to sample weights; None weighs every class by
    the inverse of its frequency so unbalanced problems stay symmetric. The
    solver itself is deterministic; the seed is recorded for provenance.
    """
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    if len(classes) < 2:
        raise ValueError("svm_train needs at least 2 classes")
    if class_weights is None:
        n = labels.shape[0]
        class_weights = {
            c: n / (len(classes) * int((labels == c).sum())) for c in classes
        }

    weights = np.zeros((len(classes), X.shape[1]))
    bias = np.zeros(len(classes))
    calibration = np.zeros((len(classes), 2))
    sample_w = np.array([class_weights[l] for l in labels], dtype=np.float64)
    for i, c in enumerate(classes):
        y = np.where(labels == c, 1.0, -1.0)
        w, b, _ = _train_binary(X, y, sample_w, epochs, lam)
        weights[i] = w
        bias[i] = b
        calibration[i] = _fit_platt(X @ w + b, y > 0)
    return LinearSvmModel(
        classes=classes,
        weights=weights,
        bias=bias,
        calibration=calibration,
        class_weights=dict(class_weights),
        seed=seed,
    )


def svm_predict(model: LinearSvmModel, X) -> np.ndarray:
    """Argmax of the calibrated one-vs-rest confidences."""
    p = calibrated_probability(model, X)
    idx = p.argmax(axis=1)
    return np.array([model.classes[i] for i in idx])


def svm_training_loss_history(X, labels, class_weights=None, epochs=200, lam=1e-3):
    """Objective of the first one-vs-rest problem at each epoch boundary."""
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    if class_weights is None:
        n = labels.shape[0]
        class_weights = {c: n / (len(classes) * int((labels == c).sum())) for c in classes}
    sw = np.array([class_weights[l] for l in labels], dtype=np.float64)
    y = np.where(labels == classes[0], 1.0, -1.0)
    _, _, history = _train_binary(X, y, sw, epochs, lam)
    return history
