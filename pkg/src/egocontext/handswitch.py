"""Context-switched multi-model hand detection.

A SOM fitted on scene-context features routes each frame to a neuron; every
neuron owns a local HOG-SVM trained on the frames assigned to it (each
training frame feeds its 5 best matching neurons). Neurons without enough
training activations or with poor local F1 are degraded: their detections
fall back to a single global HOG-SVM, so the multi-model never does much
worse than the one-model baseline.
"""

from dataclasses import dataclass, field

import numpy as np

from .evaluation import binary_rates
from .features import DescriptorConfig
from .hog import hog_descriptor
from .som import SomGrid, som_bmu, som_bmu_k
from .svm import LinearSvmModel, calibrated_probability, svm_train

HANDS = "YES"
NO_HANDS = "NO"


@dataclass(frozen=True)
class HandswitchConfig:
    min_train: int = 30
    assign_k: int = 5           # neurons trained per frame
    f1_threshold: float = 0.75
    svm_epochs: int = 200
    svm_lambda: float = 1e-3
    seed: int = 42
    hog_config: DescriptorConfig = field(default_factory=DescriptorConfig)


@dataclass
class NeuronDetector:
    neuron: int
    model: LinearSvmModel          # None while degraded without a trainable set
    train_count: int
    local_f1: float
    degraded: bool


@dataclass
class MultiModelDetector:
    som: SomGrid
    locals: list                   # one NeuronDetector per neuron, row-major
    global_model: LinearSvmModel
    config: HandswitchConfig

    @property
    def min_train(self) -> int:
        return self.config.min_train

    def degraded_count(self) -> int:
        return sum(1 for nd in self.locals if nd.degraded)


@dataclass(frozen=True)
class Detection:
    has_hands: bool
    confidence: float
    neuron: int
    used_local: bool


def _positive_probability(model: LinearSvmModel, X) -> np.ndarray:
    return calibrated_probability(model, X)[:, model.classes.index(HANDS)]


def _inverse_proportion_weights(labels) -> dict:
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    n = labels.shape[0]
    return {c: n / (len(classes) * int((labels == c).sum())) for c in classes}


def _eight_neighborhood(grid: SomGrid, neuron: int) -> set:
    coords = grid.coords()
    row, col = coords[neuron]
    out = set()
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            r, c = row + dr, col + dc
            if 0 <= r < grid.grid_h and 0 <= c < grid.grid_w:
                out.add(int(r * grid.grid_w + c))
    return out


def _local_f1(model: LinearSvmModel, hog_lts: np.ndarray, labels_lts: np.ndarray) -> float:
    """F1 with hands as positive; single-class or empty sets score 0."""
    if labels_lts.shape[0] == 0 or len(set(labels_lts.tolist())) < 2:
        return 0.0
    p = _positive_probability(model, hog_lts)
    predicted = np.where(p > 0.5, HANDS, NO_HANDS)
    return binary_rates(labels_lts, predicted, positive=HANDS)["f1"]


def train_multimodel_from_features(
    hog_X, hand_labels, som: SomGrid, context_features, config: HandswitchConfig = None
) -> MultiModelDetector:
    """Train per-neuron and global detectors from precomputed descriptors."""
    config = config or HandswitchConfig()
    hog_X = np.asarray(hog_X, dtype=np.float64)
    hand_labels = np.asarray(hand_labels)
    context_features = np.asarray(context_features, dtype=np.float64)
    present = set(hand_labels.tolist())
    if present != {HANDS, NO_HANDS}:
        raise ValueError(
            f"training needs both {HANDS!r} and {NO_HANDS!r} frames, got {sorted(present)}"
        )

    n = hog_X.shape[0]
    assigned = [[] for _ in range(som.n_neurons)]
    single_bmu = np.empty(n, dtype=np.int64)
    for i in range(n):
        best = som_bmu_k(som, context_features[i], config.assign_k)
        single_bmu[i] = best[0]
        for neuron in best:
            assigned[neuron].append(i)

    global_model = svm_train(
        hog_X,
        hand_labels,
        class_weights=_inverse_proportion_weights(hand_labels),
        epochs=config.svm_epochs,
        lam=config.svm_lambda,
        seed=config.seed,
    )

    locals_ = []
    for neuron in range(som.n_neurons):
        rows = np.array(assigned[neuron], dtype=np.int64)
        count = rows.shape[0]
        model = None
        f1 = 0.0
        if count >= config.min_train and len(set(hand_labels[rows].tolist())) == 2:
            model = svm_train(
                hog_X[rows],
                hand_labels[rows],
                class_weights=_inverse_proportion_weights(hand_labels[rows]),
                epochs=config.svm_epochs,
                lam=config.svm_lambda,
                seed=config.seed,
            )
            # local test set: neighborhood activations not trained on here
            own = set(rows.tolist())
            hood = _eight_neighborhood(som, neuron)
            lts = np.array(
                [i for i in range(n) if single_bmu[i] in hood and i not in own],
                dtype=np.int64,
            )
            f1 = _local_f1(model, hog_X[lts], hand_labels[lts])
        degraded = count < config.min_train or f1 < config.f1_threshold
        locals_.append(
            NeuronDetector(neuron=neuron, model=model, train_count=count, local_f1=f1, degraded=degraded)
        )
    return MultiModelDetector(som=som, locals=locals_, global_model=global_model, config=config)


def train_multimodel(frames, hand_labels, som: SomGrid, context_features, config: HandswitchConfig = None) -> MultiModelDetector:
    """Extract HOG per frame, then train the switched detector bank."""
    config = config or HandswitchConfig()
    hog_X = np.vstack([hog_descriptor(f, config.hog_config).values for f in frames])
    return train_multimodel_from_features(hog_X, hand_labels, som, context_features, config)


def detect_from_features(det: MultiModelDetector, hog_vec, context_feature) -> Detection:
    neuron = som_bmu(det.som, np.asarray(context_feature, dtype=np.float64))
    local = det.locals[neuron]
    hog_vec = np.asarray(hog_vec, dtype=np.float64)
    if local.degraded:
        confidence = float(_positive_probability(det.global_model, hog_vec[None, :])[0])
        used_local = False
    else:
        confidence = float(_positive_probability(local.model, hog_vec[None, :])[0])
        used_local = True
    return Detection(
        has_hands=confidence > 0.5,
        confidence=confidence,
        neuron=int(neuron),
        used_local=used_local,
    )


def detect(det: MultiModelDetector, frame, context_feature) -> Detection:
    hog_vec = hog_descriptor(frame, det.config.hog_config).values
    return detect_from_features(det, hog_vec, context_feature)


@dataclass
class LocationComparison:
    location: str
    baseline: dict   # tpr / tnr / f1 plus raw counts
    ours: dict


@dataclass
class NeuronTestStats:
    neuron: int
    activations: int
    used_local: int
    used_global: int
    test_f1: float
    degraded: bool
    train_count: int
    local_f1: float


@dataclass
class DetectionEval:
    per_location: list     # LocationComparison, sorted by location
    total: LocationComparison
    per_neuron: list       # NeuronTestStats, row-major over the grid


def evaluate_detection_from_features(
    det: MultiModelDetector, hog_X, hand_labels, locations, context_features
) -> DetectionEval:
    """Compare the switched detector against its own global-only baseline."""
    hog_X = np.asarray(hog_X, dtype=np.float64)
    hand_labels = np.asarray(hand_labels)
    locations = np.asarray(locations)
    context_features = np.asarray(context_features, dtype=np.float64)
    if hog_X.shape[0] == 0:
        raise ValueError("empty test set")

    detections = [
        detect_from_features(det, hog_X[i], context_features[i]) for i in range(hog_X.shape[0])
    ]
    ours = np.array([HANDS if d.has_hands else NO_HANDS for d in detections])
    base_p = _positive_probability(det.global_model, hog_X)
    baseline = np.where(base_p > 0.5, HANDS, NO_HANDS)

    per_location = []
    for loc in sorted(set(locations.tolist())):
        mask = locations == loc
        per_location.append(
            LocationComparison(
                location=loc,
                baseline=binary_rates(hand_labels[mask], baseline[mask], HANDS),
                ours=binary_rates(hand_labels[mask], ours[mask], HANDS),
            )
        )
    total = LocationComparison(
        location="TOTAL",
        baseline=binary_rates(hand_labels, baseline, HANDS),
        ours=binary_rates(hand_labels, ours, HANDS),
    )

    per_neuron = []
    routed = np.array([d.neuron for d in detections])
    for neuron in range(det.som.n_neurons):
        mask = routed == neuron
        nd = det.locals[neuron]
        if mask.any():
            f1 = binary_rates(hand_labels[mask], ours[mask], HANDS)["f1"]
        else:
            f1 = 0.0
        used_local = int(sum(1 for d in detections if d.neuron == neuron and d.used_local))
        per_neuron.append(
            NeuronTestStats(
                neuron=neuron,
                activations=int(mask.sum()),
                used_local=used_local,
                used_global=int(mask.sum()) - used_local,
                test_f1=f1,
                degraded=nd.degraded,
                train_count=nd.train_count,
                local_f1=nd.local_f1,
            )
        )
    return DetectionEval(per_location=per_location, total=total, per_neuron=per_neuron)


def evaluate_detection(det: MultiModelDetector, frames, hand_labels, locations, context_features) -> DetectionEval:
    hog_X = np.vstack([hog_descriptor(f, det.config.hog_config).values for f in frames])
    return evaluate_detection_from_features(det, hog_X, hand_labels, locations, context_features)
