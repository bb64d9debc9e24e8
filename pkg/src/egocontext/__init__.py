"""Unsupervised scene-context layer for wearable-camera frame streams.

Global descriptors (color histograms, GIST, HOG) feed unsupervised manifold
models (PCA, Isomap, SOM) whose output space acts as a location map:
it supports post-learning classification by majority vote, importance-
ranked feature fusion, and context-switched multi-model hand detection.
"""

__version__ = "0.1.0"

from .evaluation import (
    EvalReport,
    evaluate_classifier,
    knn_majority_vote,
    som_assignments,
    som_majority_vote,
)
from .features import (
    CONCAT_ORDER,
    DescriptorConfig,
    FeatureMatrix,
    FeatureVector,
    color_histogram,
    concat_features,
    concat_provenance,
    extract_descriptor,
    extract_matrix,
)
from .forest import ForestModel, rf_importances, rf_predict, rf_train
from .fusion import FusionTrace, rank_dimensions, rf_evaluator, som_vote_evaluator, stepwise_curve
from .gist import gist_descriptor
from .handswitch import (
    Detection,
    HandswitchConfig,
    MultiModelDetector,
    NeuronDetector,
    detect,
    evaluate_detection,
    train_multimodel,
)
from .hog import hog_descriptor
from .images import ImageFrame, frame_from_array, load_image, save_image
from .isomap import DisconnectedGraphError, IsomapModel, isomap_fit, isomap_transform
from .manifest import Manifest, ManifestEntry, load_manifest, save_manifest
from .pca import PcaModel, pca_fit, pca_transform
from .persist import load_model, save_model
from .selection import SweepCurve, pick_knee, sweep_isomap_neighbors, sweep_som_sizes
from .som import SomGrid, SomTrainConfig, TcqReport, som_bmu, som_bmu_k, som_fit, tcq
from .store import FeatureStore, load_features, save_features
from .svm import LinearSvmModel, calibrated_probability, svm_predict, svm_train
from .synth import SynthConfig, synth_frames, synth_generate
