"""Pixel-wise color space conversions from 8-bit RGB.

Conventions:
  HSV    H in [0, 360), S and V in [0, 1]
  YCBCR  full-range BT.601, all channels in [0, 255]
  LAB    CIE L*a*b* via linearised sRGB and D65 white, L in [0, 100]
"""

import numpy as np

from .images import ImageFrame

RGB = "RGB"
HSV = "HSV"
LAB = "LAB"
YCBCR = "YCBCR"

COLOR_SPACES = (RGB, HSV, LAB, YCBCR)

# value span of each channel, used by the histogram binner
CHANNEL_RANGES = {
    RGB: ((0.0, 255.0), (0.0, 255.0), (0.0, 255.0)),
    HSV: ((0.0, 360.0), (0.0, 1.0), (0.0, 1.0)),
    LAB: ((0.0, 100.0), (-128.0, 127.0), (-128.0, 127.0)),
    YCBCR: ((0.0, 255.0), (0.0, 255.0), (0.0, 255.0)),
}

_D65 = (0.95047, 1.0, 1.08883)

_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)


def rgb_to_hsv(rgb: np.ndarray) -> np.ndarray:
    """(..., 3) RGB in [0, 255] -> (..., 3) HSV."""
    c = np.asarray(rgb, dtype=np.float64) / 255.0
    r, g, b = c[..., 0], c[..., 1], c[..., 2]
    v = c.max(axis=-1)
    delta = v - c.min(axis=-1)
    s = np.where(v > 0, delta / np.where(v > 0, v, 1.0), 0.0)

    h = np.zeros_like(v)
    nz = delta > 0
    dd = np.where(nz, delta, 1.0)
    rmax = nz & (v == r)
    gmax = nz & (v == g) & ~rmax
    bmax = nz & ~rmax & ~gmax
    h = np.where(rmax, (g - b) / dd, h)
    h = np.where(gmax, 2.0 + (b - r) / dd, h)
    h = np.where(bmax, 4.0 + (r - g) / dd, h)
    h = (h * 60.0) % 360.0
    return np.stack([h, s, v], axis=-1)


def hsv_to_rgb(hsv: np.ndarray) -> np.ndarray:
    """(..., 3) HSV (H in [0, 360), S and V in [0, 1]) -> RGB in [0, 255]."""
    hsv = np.asarray(hsv, dtype=np.float64)
    h, s, v = hsv[..., 0] % 360.0, hsv[..., 1], hsv[..., 2]
    hi = np.floor(h / 60.0).astype(int) % 6
    f = h / 60.0 - np.floor(h / 60.0)
    p = v * (1.0 - s)
    q = v * (1.0 - f * s)
    t = v * (1.0 - (1.0 - f) * s)
    r = np.choose(hi, [v, q, p, p, t, v])
    g = np.choose(hi, [t, v, v, q, p, p])
    b = np.choose(hi, [p, p, t, v, v, q])
    return np.stack([r, g, b], axis=-1) * 255.0


def rgb_to_ycbcr(rgb: np.ndarray) -> np.ndarray:
    """(..., 3) RGB in [0, 255] -> full-range BT.601 YCbCr in [0, 255]."""
    c = np.asarray(rgb, dtype=np.float64)
    r, g, b = c[..., 0], c[..., 1], c[..., 2]
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b
    # the analog formulas peak at 255.5; clamp to the 8-bit range
    return np.clip(np.stack([y, cb, cr], axis=-1), 0.0, 255.0)


def _srgb_to_linear(c):
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def rgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """(..., 3) RGB in [0, 255] -> CIE L*a*b* (D65 white)."""
    c = _srgb_to_linear(np.asarray(rgb, dtype=np.float64) / 255.0)
    xyz = c @ _RGB_TO_XYZ.T
    xyz = xyz / np.asarray(_D65)

    eps = (6.0 / 29.0) ** 3
    f = np.where(xyz > eps, np.cbrt(xyz), xyz / (3.0 * (6.0 / 29.0) ** 2) + 4.0 / 29.0)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    lum = np.clip(116.0 * fy - 16.0, 0.0, 100.0)
    a = 500.0 * (fx - fy)
    b = 200.0 * (fy - fz)
    return np.stack([lum, a, b], axis=-1)


def convert_colorspace(frame: ImageFrame, space: str) -> np.ndarray:
    """Per-pixel triples of `frame` in the target space, shape (H, W, 3)."""
    rgb = frame.pixels.astype(np.float64)
    if space == RGB:
        return rgb
    if space == HSV:
        return rgb_to_hsv(rgb)
    if space == YCBCR:
        return rgb_to_ycbcr(rgb)
    if space == LAB:
        return rgb_to_lab(rgb)
    raise ValueError(f"unknown color space {space!r}, expected one of {COLOR_SPACES}")
