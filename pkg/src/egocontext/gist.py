"""GIST-style scene descriptor.

The frame is grayscaled, resized to a square, and pushed through a bank of
log-Gabor band-pass filters built directly in the frequency domain (one
analytic lobe per scale/orientation, zero response at DC). Each filter's
energy envelope is averaged over a coarse spatial grid; the concatenated
cell means form the descriptor.
"""

import numpy as np

from .features import GIST, DescriptorConfig, FeatureVector
from .images import ImageFrame, resize_bilinear, to_gray

# bandwidth of the radial log-Gaussian (sigma/f0) and angular spread factor
_RADIAL_RATIO = 0.65
_ANGULAR_FACTOR = 0.8


def gabor_bank(size: int, scales: int, orientations: int) -> np.ndarray:
    """Frequency-domain transfer functions, shape (scales*orientations, size, size).

    Filters are single-lobed (analytic): responses are complex and their
    modulus is the local band energy envelope.
    """
    freqs = np.fft.fftfreq(size)
    fx, fy = np.meshgrid(freqs, freqs)
    radius = np.hypot(fx, fy)
    radius[0, 0] = 1.0  # placeholder, DC is zeroed below
    theta = np.arctan2(fy, fx)

    log_sigma = np.log(_RADIAL_RATIO)
    sigma_theta = _ANGULAR_FACTOR * np.pi / orientations

    bank = np.empty((scales * orientations, size, size))
    idx = 0
    for s in range(scales):
        f0 = 0.25 / (2.0 ** s)
        radial = np.exp(-(np.log(radius / f0) ** 2) / (2.0 * log_sigma ** 2))
        radial[0, 0] = 0.0
        for o in range(orientations):
            angle = o * np.pi / orientations
            dtheta = np.angle(np.exp(1j * (theta - angle)))
            bank[idx] = radial * np.exp(-(dtheta ** 2) / (2.0 * sigma_theta ** 2))
            idx += 1
    return bank


def _grid_means(envelope: np.ndarray, grid: int) -> np.ndarray:
    size = envelope.shape[0]
    cell = size // grid
    trimmed = envelope[: cell * grid, : cell * grid]
    return trimmed.reshape(grid, cell, grid, cell).mean(axis=(1, 3)).ravel()


def gist_descriptor(frame: ImageFrame, config: DescriptorConfig) -> FeatureVector:
    """Oriented band energies pooled over a gist_grid x gist_grid layout."""
    size = config.gist_resize
    gray = resize_bilinear(to_gray(frame), size, size)
    bank = gabor_bank(size, config.gist_scales, config.gist_orientations)

    spectrum = np.fft.fft2(gray)
    values = np.empty(config.gist_dim)
    grid_cells = config.gist_grid ** 2
    for i, transfer in enumerate(bank):
        envelope = np.abs(np.fft.ifft2(spectrum * transfer))
        values[i * grid_cells: (i + 1) * grid_cells] = _grid_means(envelope, config.gist_grid)
    return FeatureVector(GIST, values)


def orientation_energy(vector: FeatureVector, config: DescriptorConfig) -> np.ndarray:
    """Total energy per orientation band, summed across scales and grid cells."""
    v = vector.values.reshape(config.gist_scales, config.gist_orientations, -1)
    return v.sum(axis=(0, 2))
