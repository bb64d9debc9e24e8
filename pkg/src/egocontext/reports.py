"""Report emission: CSV tables and SVG plots for every pipeline stage.

All CSV files start with a comment header recording the seed; SVG output is
deterministic (fixed hash salt, no timestamp metadata).
"""

import csv
import warnings
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("svg")
matplotlib.rcParams["svg.hashsalt"] = "egocontext"

from matplotlib import cm  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from .som import SomGrid, som_bmu  # noqa: E402

_SAVE_KW = {"format": "svg", "metadata": {"Date": None}}


def _header_line(seed, **extra) -> str:
    parts = [f"seed={seed}"] + [f"{k}={v}" for k, v in extra.items()]
    return "# " + " ".join(parts)


def sweep_csv(curve, path, seed=42) -> None:
    flagged = {
        p: flag for p, flag in zip(curve.parameter_values, curve.flags) if flag
    }
    with open(path, "w", newline="") as fh:
        fh.write(_header_line(seed, metric=curve.metric, flags=flagged or "none") + "\n")
        writer = csv.writer(fh)
        writer.writerow(["parameter", "score"])
        for p, s in zip(curve.parameter_values, curve.scores):
            writer.writerow([p, repr(float(s))])


def eval_csv(report, path, seed=42, task="") -> None:
    with open(path, "w", newline="") as fh:
        fh.write(_header_line(seed, task=task or "unspecified") + "\n")
        writer = csv.writer(fh)
        writer.writerow(["accuracy", repr(report.accuracy)])
        writer.writerow(["label"] + report.labels + ["support"])
        for label, row, support in zip(report.labels, report.confusion, report.support):
            writer.writerow([label] + [repr(float(v)) for v in row] + [int(support)])


def detection_csv(det_eval, path, seed=42) -> None:
    cols = [
        "location",
        "baseline_tpr", "ours_tpr",
        "baseline_tnr", "ours_tnr",
        "baseline_f1", "ours_f1",
        "baseline_tp", "baseline_fn", "baseline_tn", "baseline_fp",
        "ours_tp", "ours_fn", "ours_tn", "ours_fp",
    ]
    with open(path, "w", newline="") as fh:
        fh.write(_header_line(seed) + "\n")
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in det_eval.per_location + [det_eval.total]:
            writer.writerow(
                [row.location]
                + [repr(row.baseline[k]) if isinstance(row.baseline[k], float) else row.baseline[k]
                   for k in ("tpr",)]
                + [repr(row.ours["tpr"])]
                + [repr(row.baseline["tnr"]), repr(row.ours["tnr"])]
                + [repr(row.baseline["f1"]), repr(row.ours["f1"])]
                + [row.baseline[k] for k in ("tp", "fn", "tn", "fp")]
                + [row.ours[k] for k in ("tp", "fn", "tn", "fp")]
            )


def per_neuron_csv(det_eval, path, seed=42) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(_header_line(seed) + "\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["neuron", "activations", "used_local", "used_global",
             "test_f1", "degraded", "train_count", "local_f1"]
        )
        for s in det_eval.per_neuron:
            writer.writerow(
                [s.neuron, s.activations, s.used_local, s.used_global,
                 repr(s.test_f1), int(s.degraded), s.train_count, repr(s.local_f1)]
            )


def fusion_csv(trace, path, seed=42) -> None:
    evaluators = sorted(trace.steps[0].evaluator_scores) if trace.steps else []
    families = sorted({f for s in trace.steps for f in s.family_counts})
    with open(path, "w", newline="") as fh:
        fh.write(_header_line(seed) + "\n")
        writer = csv.writer(fh)
        writer.writerow(["dims_used"] + [f"acc_{e}" for e in evaluators] + families)
        for s in trace.steps:
            writer.writerow(
                [s.dims_used]
                + [repr(s.evaluator_scores[e]) for e in evaluators]
                + [s.family_counts.get(f, 0) for f in families]
            )


def trajectory_colors(n: int) -> np.ndarray:
    """Monotone color ramp: entry i encodes temporal position i/(n-1)."""
    if n <= 1:
        return np.zeros(max(n, 0))
    return np.arange(n) / (n - 1)


def plot_sweep(curve, path, title="") -> None:
    fig = Figure(figsize=(5, 3.2))
    ax = fig.add_subplot(111)
    ax.plot(curve.parameter_values, curve.scores, marker="o")
    for p, s, flag in zip(curve.parameter_values, curve.scores, curve.flags):
        if flag:
            ax.annotate("!", (p, s), color="red")
    ax.set_xlabel("parameter")
    ax.set_ylabel(curve.metric.lower())
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)


def plot_embedding_scatter(embedding, labels, path, title="") -> None:
    embedding = np.asarray(embedding)
    labels = np.asarray(labels)
    fig = Figure(figsize=(5, 4))
    ax = fig.add_subplot(111)
    for i, label in enumerate(sorted(set(labels.tolist()))):
        mask = labels == label
        ax.scatter(embedding[mask, 0], embedding[mask, 1], s=8, label=str(label),
                   color=cm.tab10(i % 10))
    ax.legend(fontsize=7)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)


def plot_som_hitmap(grid: SomGrid, X, labels, path, title="") -> None:
    """Grid map colored by each neuron's majority training label."""
    X = np.asarray(X)
    labels = np.asarray(labels)
    label_values = sorted(set(labels.tolist()))
    index = {l: i for i, l in enumerate(label_values)}
    counts = np.zeros((grid.n_neurons, len(label_values)))
    for x, l in zip(X, labels):
        counts[som_bmu(grid, x), index[l]] += 1

    fig = Figure(figsize=(5, 4.5))
    ax = fig.add_subplot(111)
    coords = grid.coords()
    hits = counts.sum(axis=1)
    for n in range(grid.n_neurons):
        r, c = coords[n]
        if hits[n] == 0:
            ax.scatter(c, r, s=12, color="lightgray", marker="s")
        else:
            majority = int(counts[n].argmax())
            ax.scatter(c, r, s=20 + 180 * hits[n] / hits.max(),
                       color=cm.tab10(majority % 10), marker="s")
    handles = [
        matplotlib.lines.Line2D([], [], linestyle="", marker="s",
                                color=cm.tab10(i % 10), label=str(l))
        for i, l in enumerate(label_values)
    ]
    ax.legend(handles=handles, fontsize=7)
    ax.invert_yaxis()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)


def plot_trajectory(grid: SomGrid, X_sequence, path, title="") -> None:
    """BMU path over a frame sequence, early frames light and late dark."""
    X_sequence = np.asarray(X_sequence)
    coords = grid.coords()
    pos = np.array([coords[som_bmu(grid, x)] for x in X_sequence], dtype=np.float64)
    ramp = trajectory_colors(len(X_sequence))
    fig = Figure(figsize=(5, 4.5))
    ax = fig.add_subplot(111)
    jitter = 0.15 * np.stack([np.cos(2 * np.pi * ramp), np.sin(2 * np.pi * ramp)], axis=1)
    ax.plot(pos[:, 1], pos[:, 0], color="lightgray", linewidth=0.5, zorder=1)
    ax.scatter(pos[:, 1] + jitter[:, 0], pos[:, 0] + jitter[:, 1],
               c=ramp, cmap="autumn_r", s=14, zorder=2)
    ax.set_xlim(-1, grid.grid_w)
    ax.set_ylim(-1, grid.grid_h)
    ax.invert_yaxis()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)


def plot_fusion(trace, path, title="") -> None:
    """Accuracy lines over prefix size plus a family-composition strip."""
    steps = trace.steps
    dims = [s.dims_used for s in steps]
    evaluators = sorted(steps[0].evaluator_scores)
    families = sorted({f for s in steps for f in s.family_counts})
    fig = Figure(figsize=(6, 4.5))
    ax = fig.add_subplot(211)
    for e in evaluators:
        ax.plot(dims, [s.evaluator_scores[e] for s in steps], marker="o", label=e)
    ax.set_ylabel("accuracy")
    ax.legend(fontsize=7)
    strip = fig.add_subplot(212, sharex=ax)
    comp = np.array([[s.family_counts.get(f, 0) for s in steps] for f in families], dtype=float)
    strip.imshow(comp, aspect="auto", cmap="viridis",
                 extent=(min(dims), max(dims), len(families), 0))
    strip.set_yticks(np.arange(len(families)) + 0.5)
    strip.set_yticklabels(families, fontsize=7)
    strip.set_xlabel("dimensions used")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)


def plot_neuron_grids(det_eval, grid: SomGrid, out_dir, prefix="neuron") -> list:
    """Three grid maps: training counts, local/global usage, test F1."""
    out_dir = Path(out_dir)
    coords = grid.coords()
    stats = det_eval.per_neuron
    paths = []

    def grid_image(values):
        img = np.zeros((grid.grid_h, grid.grid_w))
        for s, v in zip(stats, values):
            r, c = coords[s.neuron]
            img[r, c] = v
        return img

    panels = [
        ("train_counts", grid_image([s.train_count for s in stats]), "Blues"),
        ("local_usage", grid_image(
            [s.used_local / s.activations if s.activations else 0.0 for s in stats]
        ), "RdYlGn"),
        ("test_f1", grid_image([s.test_f1 for s in stats]), "viridis"),
    ]
    for name, img, cmap in panels:
        fig = Figure(figsize=(4.2, 3.8))
        ax = fig.add_subplot(111)
        im = ax.imshow(img, cmap=cmap)
        for s in stats:
            if s.degraded:
                r, c = coords[s.neuron]
                ax.text(c, r, "x", ha="center", va="center", fontsize=7, color="gray")
        fig.colorbar(im, ax=ax, shrink=0.85)
        ax.set_title(name.replace("_", " "))
        fig.tight_layout()
        target = out_dir / f"{prefix}_{name}.svg"
        fig.savefig(target, **_SAVE_KW)
        paths.append(target)
    return paths


def warn_empty_split(stage: str) -> None:
    warnings.warn(f"{stage}: empty test split, no report emitted", stacklevel=2)
