"""Image frames: loading, grayscale conversion and resizing.

Frames are 8-bit RGB rasters stored row-major as (height, width, 3) uint8
arrays. All downstream descriptors consume this type.
"""

from dataclasses import dataclass

import numpy as np
from PIL import Image


@dataclass(frozen=True)
class ImageFrame:
    """A decoded 8-bit RGB raster, the unit of ingestion."""

    pixels: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        px = self.pixels
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) pixel array, got shape {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("frame must be at least 1x1")
        if px.dtype != np.uint8:
            raise ValueError(f"expected uint8 channels, got {px.dtype}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def frame_from_array(arr) -> ImageFrame:
    """Build an ImageFrame from any array-like with channels in [0, 255]."""
    arr = np.asarray(arr)
    if arr.dtype != np.uint8:
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("channel values must lie in [0, 255]")
        arr = np.round(arr).astype(np.uint8)
    return ImageFrame(pixels=np.ascontiguousarray(arr))


def load_image(path) -> ImageFrame:
    """Load a PNG or JPEG file as an 8-bit RGB frame."""
    with Image.open(path) as im:
        rgb = im.convert("RGB")
        return ImageFrame(pixels=np.asarray(rgb, dtype=np.uint8))


def save_image(frame: ImageFrame, path) -> None:
    Image.fromarray(frame.pixels, mode="RGB").save(path)


def to_gray(frame: ImageFrame) -> np.ndarray:
    """BT.601 luma in [0, 1], float64 (H, W)."""
    px = frame.pixels.astype(np.float64) / 255.0
    return 0.299 * px[:, :, 0] + 0.587 * px[:, :, 1] + 0.114 * px[:, :, 2]


def resize_bilinear(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize of a 2-D float array using half-pixel-centred sampling.

    Symmetric in both axes, so resizing commutes with 180-degree rotation.
    """
    in_h, in_w = img.shape
    if (in_h, in_w) == (out_h, out_w):
        return img.copy()
    # map output pixel centres onto input coordinates
    ys = (np.arange(out_h) + 0.5) * (in_h / out_h) - 0.5
    xs = (np.arange(out_w) + 0.5) * (in_w / out_w) - 0.5
    ys = np.clip(ys, 0.0, in_h - 1.0)
    xs = np.clip(xs, 0.0, in_w - 1.0)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    top = img[np.ix_(y0, x0)] * (1 - wx) + img[np.ix_(y0, x1)] * wx
    bot = img[np.ix_(y1, x0)] * (1 - wx) + img[np.ix_(y1, x1)] * wx
    return top * (1 - wy) + bot * wy
