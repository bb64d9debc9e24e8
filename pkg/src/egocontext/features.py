"""Global frame descriptors: color histograms, concatenation and provenance.

Every descriptor is a deterministic, resolution-independent function of the
frame and a DescriptorConfig; descriptor dimension depends only on the
config.
"""

from dataclasses import dataclass, field

import numpy as np

from . import colorspace
from .colorspace import CHANNEL_RANGES
from .images import ImageFrame

# descriptor tags
RGB_HIST = "RGB_HIST"
HSV_HIST = "HSV_HIST"
LAB_HIST = "LAB_HIST"
YCBCR_HIST = "YCBCR_HIST"
GIST = "GIST"
HOG = "HOG"
CONCAT = "CONCAT"
CRAFTED = "CRAFTED"

DESCRIPTOR_IDS = (RGB_HIST, HSV_HIST, LAB_HIST, YCBCR_HIST, GIST, HOG, CONCAT, CRAFTED)

HIST_SPACE = {
    RGB_HIST: colorspace.RGB,
    HSV_HIST: colorspace.HSV,
    LAB_HIST: colorspace.LAB,
    YCBCR_HIST: colorspace.YCBCR,
}
SPACE_HIST = {v: k for k, v in HIST_SPACE.items()}

# fixed family order used by concat_features
CONCAT_ORDER = (RGB_HIST, HSV_HIST, LAB_HIST, YCBCR_HIST, GIST)


@dataclass(frozen=True)
class DescriptorConfig:
    """Parameters shared by all descriptor extractors.

    Persisted alongside every feature file so stored vectors stay
    interpretable.
    """

    bins_per_channel: int = 32
    gist_scales: int = 4
    gist_orientations: int = 8
    gist_grid: int = 4
    gist_resize: int = 128              # square resize, pixels
    hog_resize: tuple = (128, 72)       # (width, height)
    hog_cell: int = 8
    hog_bins: int = 9
    hog_block: int = 2                  # block side, in cells

    def __post_init__(self):
        if self.bins_per_channel < 2:
            raise ValueError("bins_per_channel must be >= 2")
        for name in ("gist_scales", "gist_orientations", "gist_grid",
                     "gist_resize", "hog_cell", "hog_bins", "hog_block"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.hog_resize[0] < 1 or self.hog_resize[1] < 1:
            raise ValueError("hog_resize must be positive")

    @property
    def hist_dim(self) -> int:
        return 3 * self.bins_per_channel

    @property
    def gist_dim(self) -> int:
        return self.gist_scales * self.gist_orientations * self.gist_grid ** 2

    @property
    def hog_dim(self) -> int:
        w, h = self.hog_resize
        cells_x = w // self.hog_cell
        cells_y = h // self.hog_cell
        bx = cells_x - self.hog_block + 1
        by = cells_y - self.hog_block + 1
        return bx * by * self.hog_block ** 2 * self.hog_bins

    def dim_of(self, descriptor_id: str) -> int:
        if descriptor_id in HIST_SPACE:
            return self.hist_dim
        if descriptor_id == GIST:
            return self.gist_dim
        if descriptor_id == HOG:
            return self.hog_dim
        if descriptor_id == CONCAT:
            return sum(self.dim_of(d) for d in CONCAT_ORDER)
        raise ValueError(f"no fixed dimension for {descriptor_id!r}")

    def to_dict(self) -> dict:
        return {
            "bins_per_channel": self.bins_per_channel,
            "gist_scales": self.gist_scales,
            "gist_orientations": self.gist_orientations,
            "gist_grid": self.gist_grid,
            "gist_resize": self.gist_resize,
            "hog_resize": list(self.hog_resize),
            "hog_cell": self.hog_cell,
            "hog_bins": self.hog_bins,
            "hog_block": self.hog_block,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DescriptorConfig":
        d = dict(d)
        d["hog_resize"] = tuple(d["hog_resize"])
        return cls(**d)


@dataclass(frozen=True)
class FeatureVector:
    """A real-valued descriptor tagged with its extractor."""

    descriptor_id: str
    values: np.ndarray

    def __post_init__(self):
        if self.descriptor_id not in DESCRIPTOR_IDS:
            raise ValueError(f"unknown descriptor_id {self.descriptor_id!r}")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    @property
    def dim(self) -> int:
        return self.values.shape[0]


@dataclass
class FeatureMatrix:
    """N stacked feature vectors with their frame identifiers.

    Row order is the manifest (temporal) order; topology metrics rely on it.
    """

    data: np.ndarray                  # (N, d)
    row_order: list = field(default_factory=list)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2:
            raise ValueError("feature matrix must be 2-D")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("feature matrix contains non-finite entries")
        if not self.row_order:
            self.row_order = [str(i) for i in range(self.data.shape[0])]
        if len(self.row_order) != self.data.shape[0]:
            raise ValueError("row_order length must match row count")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


def color_histogram(frame: ImageFrame, space: str, config: DescriptorConfig) -> FeatureVector:
    """Concatenated per-channel histograms, each block normalized to sum 1."""
    triples = colorspace.convert_colorspace(frame, space)
    bins = config.bins_per_channel
    blocks = []
    for ch in range(3):
        lo, hi = CHANNEL_RANGES[space][ch]
        vals = triples[:, :, ch].ravel()
        hist, _ = np.histogram(np.clip(vals, lo, hi), bins=bins, range=(lo, hi))
        blocks.append(hist / hist.sum())
    return FeatureVector(SPACE_HIST[space], np.concatenate(blocks))


def concat_features(parts) -> FeatureVector:
    """Concatenate per-frame descriptors into a single CONCAT vector.

    Callers must keep the same part ordering across frames; the canonical
    pipeline order is RGB, HSV, LAB, YCbCr, GIST.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("concat_features needs at least one part")
    return FeatureVector(CONCAT, np.concatenate([p.values for p in parts]))


def concat_provenance(config: DescriptorConfig) -> list:
    """Per-dimension (source descriptor, source index) for the CONCAT layout."""
    table = []
    for did in CONCAT_ORDER:
        table.extend((did, i) for i in range(config.dim_of(did)))
    return table


def extract_descriptor(frame: ImageFrame, descriptor_id: str, config: DescriptorConfig) -> FeatureVector:
    """Extract any single-family descriptor (or the CONCAT of all context families)."""
    if descriptor_id in HIST_SPACE:
        return color_histogram(frame, HIST_SPACE[descriptor_id], config)
    if descriptor_id == GIST:
        from .gist import gist_descriptor
        return gist_descriptor(frame, config)
    if descriptor_id == HOG:
        from .hog import hog_descriptor
        return hog_descriptor(frame, config)
    if descriptor_id == CONCAT:
        parts = [extract_descriptor(frame, d, config) for d in CONCAT_ORDER]
        return concat_features(parts)
    raise ValueError(f"cannot extract descriptor {descriptor_id!r}")


def extract_matrix(frames, descriptor_id: str, config: DescriptorConfig, row_order=None) -> FeatureMatrix:
    """Stack one descriptor over a frame sequence, preserving input order."""
    rows = [extract_descriptor(f, descriptor_id, config).values for f in frames]
    data = np.vstack(rows) if rows else np.zeros((0, config.dim_of(descriptor_id)))
    return FeatureMatrix(data=data, row_order=list(row_order) if row_order else [])
