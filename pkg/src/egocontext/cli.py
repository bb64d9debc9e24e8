"""Command-line pipeline: synth, extract, fit, sweep, eval-context, fuse,
handdet-train, handdet-eval, report.

Every stage is seeded (default 42) and records the seed in its output
header. Exit codes: 0 success, 1 runtime failure (diagnostic on stderr),
2 usage errors.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .evaluation import evaluate_classifier, knn_majority_vote, som_assignments, som_majority_vote
from .features import (
    CONCAT,
    DescriptorConfig,
    FeatureMatrix,
    concat_provenance,
    extract_matrix,
)
from .forest import rf_predict, rf_train
from .fusion import rank_dimensions, rf_evaluator, som_vote_evaluator, stepwise_curve
from .handswitch import (
    HandswitchConfig,
    MultiModelDetector,
    evaluate_detection_from_features,
    train_multimodel_from_features,
)
from .hog import hog_descriptor
from .images import load_image
from .isomap import IsomapModel, isomap_fit, isomap_transform
from .manifest import Manifest, load_manifest, resolve_paths
from .pca import PcaModel, pca_fit, pca_transform
from .persist import load_model, save_model
from .reports import (
    detection_csv,
    eval_csv,
    fusion_csv,
    per_neuron_csv,
    plot_embedding_scatter,
    plot_fusion,
    plot_neuron_grids,
    plot_som_hitmap,
    plot_sweep,
    plot_trajectory,
    sweep_csv,
    warn_empty_split,
)
from .selection import pick_knee, sweep_isomap_neighbors, sweep_som_sizes
from .som import SomGrid, SomTrainConfig, som_fit
from .store import FeatureStore, check_alignment, load_features, save_features
from .svm import svm_predict, svm_train
from .synth import SynthConfig, synth_generate

FEATURE_IDS = {
    "rgb": "RGB_HIST",
    "hsv": "HSV_HIST",
    "lab": "LAB_HIST",
    "ycbcr": "YCBCR_HIST",
    "gist": "GIST",
    "hog": "HOG",
    "concat": "CONCAT",
}

TASK_COLUMN = {"indoor_outdoor": "indoor_outdoor", "location": "location"}


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def _load_aligned(args):
    manifest = load_manifest(args.manifest)
    store = load_features(args.features)
    check_alignment(store, manifest)
    return manifest, store


def _split_rows(manifest, store, split):
    rows = manifest.rows(split)
    return rows, store.matrix.data[rows]


def cmd_synth(args):
    config = SynthConfig(
        n_locations=args.locations,
        frames_per_location=args.frames,
        brightness_jitter=args.brightness_jitter,
        with_hands=not args.no_hands,
        seed=args.seed,
    )
    manifest = synth_generate(config, args.out)
    print(f"wrote {len(manifest)} frames and manifest.csv under {args.out}")
    return 0


def cmd_extract(args):
    manifest = load_manifest(args.manifest)
    config = DescriptorConfig(bins_per_channel=args.bins)
    descriptor = FEATURE_IDS[args.feature]
    frames = (load_image(p) for p in resolve_paths(manifest, args.manifest))
    matrix = extract_matrix(
        frames, descriptor, config, row_order=[e.path for e in manifest.entries]
    )
    store = FeatureStore(
        descriptor_id=descriptor,
        config=config,
        manifest_checksum=manifest.checksum(),
        matrix=matrix,
        seed=args.seed,
    )
    save_features(store, args.out)
    print(f"extracted {matrix.rows}x{matrix.cols} {descriptor} -> {args.out}")
    return 0


def cmd_fit(args):
    manifest, store = _load_aligned(args)
    _, train_X = _split_rows(manifest, store, "TRAIN")
    if args.model == "pca":
        model = pca_fit(train_X, args.components)
    elif args.model == "isomap":
        model = isomap_fit(train_X, args.k_neighbors, args.components)
    else:
        cfg = SomTrainConfig(seed=args.seed, epochs=args.epochs)
        model = som_fit(train_X, args.som_size, args.som_size, cfg)
    save_model(model, args.out, seed=args.seed)
    print(f"fitted {args.model} on {train_X.shape[0]} training rows -> {args.out}")
    return 0


def cmd_sweep(args):
    manifest, store = _load_aligned(args)
    _, X = _split_rows(manifest, store, args.split.upper())
    if args.kind == "isomap-k":
        curve = sweep_isomap_neighbors(X, _int_list(args.k_values), args.components)
    else:
        curve = sweep_som_sizes(X, _int_list(args.sizes), SomTrainConfig(seed=args.seed))
    out = Path(args.out)
    sweep_csv(curve, out.with_suffix(".csv"), seed=args.seed)
    plot_sweep(curve, out.with_suffix(".svg"), title=args.kind)
    knee = pick_knee(curve) if len(curve.scores) >= 3 else None
    print(f"sweep {args.kind}: scores={['%.4f' % s for s in curve.scores]} knee={knee}")
    return 0


def _context_predictor(model, train_X, train_labels, knn_k):
    if isinstance(model, SomGrid):
        voter = som_assignments(model, train_X, train_labels)
        return lambda x: som_majority_vote(voter, x)
    if isinstance(model, PcaModel):
        emb = pca_transform(model, train_X)
        return lambda x: knn_majority_vote(emb, train_labels, pca_transform(model, x), k=knn_k)
    if isinstance(model, IsomapModel):
        emb = isomap_transform(model, train_X)
        return lambda x: knn_majority_vote(emb, train_labels, isomap_transform(model, x), k=knn_k)
    raise ValueError(f"cannot evaluate model type {type(model).__name__} as a context classifier")


def cmd_eval_context(args):
    manifest, store = _load_aligned(args)
    column = TASK_COLUMN[args.task]
    train_rows, train_X = _split_rows(manifest, store, "TRAIN")
    test_rows, test_X = _split_rows(manifest, store, "TEST")
    train_labels = np.array([getattr(manifest.entries[i], column) for i in train_rows])
    test_labels = np.array([getattr(manifest.entries[i], column) for i in test_rows])
    if test_labels.shape[0] == 0:
        warn_empty_split("eval-context")
        return 0

    model = load_model(args.model)
    predict = _context_predictor(model, train_X, train_labels, args.knn)
    report = evaluate_classifier(predict, test_X, test_labels)
    out = Path(args.out)
    eval_csv(report, out.with_suffix(".csv"), seed=args.seed, task=args.task)
    print(f"{args.task} accuracy: {report.accuracy:.4f} -> {out.with_suffix('.csv')}")

    if args.baseline != "none":
        if args.baseline == "rf":
            baseline = rf_train(train_X, train_labels, seed=args.seed)
            base_pred = lambda x: rf_predict(baseline, x[None, :])[0]
        else:
            baseline = svm_train(train_X, train_labels, seed=args.seed)
            base_pred = lambda x: svm_predict(baseline, x[None, :])[0]
        base_report = evaluate_classifier(base_pred, test_X, test_labels)
        base_path = out.parent / (out.stem + f"_{args.baseline}.csv")
        eval_csv(base_report, base_path, seed=args.seed, task=args.task)
        print(f"{args.baseline} baseline accuracy: {base_report.accuracy:.4f} -> {base_path}")
    return 0


def cmd_fuse(args):
    manifest, store = _load_aligned(args)
    if store.descriptor_id != CONCAT:
        raise ValueError("fuse needs a CONCAT feature store")
    column = TASK_COLUMN[args.task]
    train_rows, train_X = _split_rows(manifest, store, "TRAIN")
    test_rows, test_X = _split_rows(manifest, store, "TEST")
    train_labels = np.array([getattr(manifest.entries[i], column) for i in train_rows])
    test_labels = np.array([getattr(manifest.entries[i], column) for i in test_rows])
    if test_labels.shape[0] == 0:
        warn_empty_split("fuse")
        return 0

    ranking = rank_dimensions(train_X, train_labels, seed=args.seed)
    evaluators = {
        f"som{args.som_size}_vote": som_vote_evaluator(
            args.som_size, SomTrainConfig(seed=args.seed)
        ),
        "rf": rf_evaluator(seed=args.seed),
    }
    trace = stepwise_curve(
        ranking, train_X, train_labels, test_X, test_labels,
        evaluators=evaluators,
        provenance=concat_provenance(store.config),
        step=args.step,
        max_dims=args.max_dims,
    )
    out = Path(args.out)
    fusion_csv(trace, out.with_suffix(".csv"), seed=args.seed)
    plot_fusion(trace, out.with_suffix(".svg"))
    best = max(s.evaluator_scores[f"som{args.som_size}_vote"] for s in trace.steps)
    print(f"fusion best som accuracy {best:.4f} over {len(trace.steps)} steps -> {out}")
    return 0


def _detection_inputs(manifest, manifest_path, bins):
    config = DescriptorConfig(bins_per_channel=bins)
    paths = resolve_paths(manifest, manifest_path)
    frames = [load_image(p) for p in paths]
    context = extract_matrix(frames, "HSV_HIST", config).data
    hog_X = np.vstack([hog_descriptor(f, config).values for f in frames])
    return config, context, hog_X


def cmd_handdet_train(args):
    manifest = load_manifest(args.manifest)
    config, context, hog_X = _detection_inputs(manifest, args.manifest, args.bins)
    train_rows = manifest.rows("TRAIN")
    labels = np.array([manifest.entries[i].hands for i in train_rows])
    if "UNKNOWN" in labels:
        raise ValueError("training rows must carry YES/NO hand labels")
    if args.som:
        som = load_model(args.som)
        if not isinstance(som, SomGrid):
            raise ValueError(f"{args.som} is not a SOM model")
    else:
        som = som_fit(context[train_rows], args.som_size, args.som_size,
                      SomTrainConfig(seed=args.seed))
    hs_config = HandswitchConfig(
        min_train=args.min_train, seed=args.seed, hog_config=config
    )
    det = train_multimodel_from_features(
        hog_X[train_rows], labels, som, context[train_rows], hs_config
    )
    save_model(det, args.out, seed=args.seed)
    print(
        f"trained multimodel detector: {som.grid_w}x{som.grid_h} grid, "
        f"{det.degraded_count()}/{som.n_neurons} degraded -> {args.out}"
    )
    return 0


def cmd_handdet_eval(args):
    manifest = load_manifest(args.manifest)
    det = load_model(args.detector)
    if not isinstance(det, MultiModelDetector):
        raise ValueError(f"{args.detector} is not a multimodel detector")
    config, context, hog_X = _detection_inputs(
        manifest, args.manifest, det.config.hog_config.bins_per_channel
    )
    test_rows = manifest.rows("TEST")
    if not test_rows:
        warn_empty_split("handdet-eval")
        return 0
    labels = np.array([manifest.entries[i].hands for i in test_rows])
    locations = np.array([manifest.entries[i].location for i in test_rows])
    ev = evaluate_detection_from_features(
        det, hog_X[test_rows], labels, locations, context[test_rows]
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    detection_csv(ev, out / "detection.csv", seed=args.seed)
    per_neuron_csv(ev, out / "per_neuron.csv", seed=args.seed)
    plot_neuron_grids(ev, det.som, out)
    print(
        f"total F1 ours {ev.total.ours['f1']:.4f} vs baseline "
        f"{ev.total.baseline['f1']:.4f} -> {out}"
    )
    return 0


def cmd_report(args):
    manifest, store = _load_aligned(args)
    model = load_model(args.model)
    column = TASK_COLUMN[args.task]
    rows, X = _split_rows(manifest, store, args.split.upper())
    labels = np.array([getattr(manifest.entries[i], column) for i in rows])
    if not rows:
        warn_empty_split("report")
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if isinstance(model, SomGrid):
        plot_som_hitmap(model, X, labels, out / "som_hitmap.svg", title=args.task)
        plot_trajectory(model, X, out / "trajectory.svg", title=f"{args.split} sequence")
        print(f"wrote som_hitmap.svg and trajectory.svg under {out}")
    else:
        if isinstance(model, PcaModel):
            emb = pca_transform(model, X)
        else:
            emb = isomap_transform(model, X)
        plot_embedding_scatter(emb[:, :2], labels, out / "embedding.svg", title=args.task)
        print(f"wrote embedding.svg under {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egocontext",
        description="Unsupervised scene-context pipeline for wearable-camera frames",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifest=True, features=False, out=True):
        p.add_argument("--seed", type=int, default=42)
        if manifest:
            p.add_argument("--manifest", required=True)
        if features:
            p.add_argument("--features", required=True)
        if out:
            p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="render a synthetic dataset")
    common(p, manifest=False)
    p.add_argument("--locations", type=int, default=5)
    p.add_argument("--frames", type=int, default=120)
    p.add_argument("--brightness-jitter", type=float, default=0.05)
    p.add_argument("--no-hands", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="extract a descriptor for every frame")
    common(p)
    p.add_argument("--feature", choices=sorted(FEATURE_IDS), required=True)
    p.add_argument("--bins", type=int, default=32)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("fit", help="fit a manifold model on the training split")
    p.add_argument("model", choices=["pca", "isomap", "som"])
    common(p, features=True)
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--k-neighbors", type=int, default=12)
    p.add_argument("--som-size", type=int, default=20)
    p.add_argument("--epochs", type=int, default=20)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sweep", help="hyperparameter sweep with knee report")
    p.add_argument("kind", choices=["isomap-k", "som-size"])
    common(p, features=True)
    p.add_argument("--k-values", default="4,8,12,16,20")
    p.add_argument("--sizes", default="5,20,30")
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--split", choices=["train", "test"], default="train")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eval-context", help="majority-vote evaluation of a fitted model")
    common(p, features=True)
    p.add_argument("--model", required=True)
    p.add_argument("--task", choices=sorted(TASK_COLUMN), required=True)
    p.add_argument("--baseline", choices=["rf", "svm", "none"], default="rf")
    p.add_argument("--knn", type=int, default=10)
    p.set_defaults(func=cmd_eval_context)

    p = sub.add_parser("fuse", help="importance-ranked fusion trace")
    common(p, features=True)
    p.add_argument("--task", choices=sorted(TASK_COLUMN), required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--max-dims", type=int, default=60)
    p.add_argument("--som-size", type=int, default=30)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("handdet-train", help="train the switched hand detector")
    common(p)
    p.add_argument("--som", default=None, help="fitted SOM model; fit one when omitted")
    p.add_argument("--som-size", type=int, default=9)
    p.add_argument("--bins", type=int, default=32)
    p.add_argument("--min-train", type=int, default=30)
    p.set_defaults(func=cmd_handdet_train)

    p = sub.add_parser("handdet-eval", help="evaluate detector vs global baseline")
    common(p)
    p.add_argument("--detector", required=True)
    p.set_defaults(func=cmd_handdet_eval)

    p = sub.add_parser("report", help="embedding / hit-map / trajectory plots")
    common(p, features=True)
    p.add_argument("--model", required=True)
    p.add_argument("--task", choices=sorted(TASK_COLUMN), default="location")
    p.add_argument("--split", choices=["train", "test"], default="test")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface a clean diagnostic, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
