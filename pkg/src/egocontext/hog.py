"""Whole-frame histogram-of-oriented-gradients descriptor.

One global descriptor per frame (no sliding window): grayscale, resize,
centered gradients, unsigned orientation binning per cell, overlapping
block L2 normalization.
"""

import numpy as np

from .features import HOG, DescriptorConfig, FeatureVector
from .images import ImageFrame, resize_bilinear, to_gray

_NORM_EPS = 1e-6


def hog_descriptor(frame: ImageFrame, config: DescriptorConfig) -> FeatureVector:
    out_w, out_h = config.hog_resize
    gray = resize_bilinear(to_gray(frame), out_h, out_w)

    gy, gx = np.gradient(gray)
    magnitude = np.hypot(gx, gy)
    angle = np.arctan2(gy, gx) % np.pi  # unsigned, [0, pi)

    nbins = config.hog_bins
    cell = config.hog_cell
    cells_y = out_h // cell
    cells_x = out_w // cell
    bin_idx = np.minimum((angle / (np.pi / nbins)).astype(int), nbins - 1)

    # per-cell orientation histograms, magnitude-weighted
    hist = np.zeros((cells_y, cells_x, nbins))
    trimmed_m = magnitude[: cells_y * cell, : cells_x * cell]
    trimmed_b = bin_idx[: cells_y * cell, : cells_x * cell]
    cy = np.repeat(np.arange(cells_y), cell)[:, None]
    cx = np.repeat(np.arange(cells_x), cell)[None, :]
    np.add.at(hist, (np.broadcast_to(cy, trimmed_m.shape),
                     np.broadcast_to(cx, trimmed_m.shape),
                     trimmed_b), trimmed_m)

    # overlapping blocks, stride one cell, L2 normalization
    bs = config.hog_block
    blocks = []
    for by in range(cells_y - bs + 1):
        for bx in range(cells_x - bs + 1):
            v = hist[by: by + bs, bx: bx + bs].ravel()
            blocks.append(v / np.sqrt(np.sum(v * v) + _NORM_EPS ** 2))
    return FeatureVector(HOG, np.concatenate(blocks))


def dominant_cell_bin(vector: FeatureVector, config: DescriptorConfig, cell_y: int, cell_x: int) -> int:
    """Argmax orientation bin of one cell, read from the first block containing it."""
    out_w, out_h = config.hog_resize
    cells_x = out_w // config.hog_cell
    cells_y = out_h // config.hog_cell
    bs = config.hog_block
    by = min(max(cell_y - bs + 1, 0), cells_y - bs)
    bx = min(max(cell_x - bs + 1, 0), cells_x - bs)
    blocks_x = cells_x - bs + 1
    block = vector.values.reshape(-1, bs, bs, config.hog_bins)[by * blocks_x + bx]
    return int(np.argmax(block[cell_y - by, cell_x - bx]))
