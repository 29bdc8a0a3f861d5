"""Classical comparison detectors: Top-Hat, Max-Median, Difference of Gaussians.

Each produces a non-negative saliency map of the input's dimensions so a
single threshold-sweep ROC harness serves every method; the subtraction
steps in all three can go negative, and negatives are clamped to zero by
convention.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .frames import as_frame, convolve


def tophat(frame, se_side: int = 5) -> np.ndarray:
    """White top-hat: frame minus its opening by a flat square element.

    Opening (erode then dilate, replicate borders) removes structure smaller
    than the element, so compact bright spots survive the subtraction.
    """
    frame = as_frame(frame)
    if se_side < 3 or se_side % 2 == 0:
        raise ValueError(f"se_side must be odd and >= 3, got {se_side}")
    opened = ndimage.grey_opening(frame, size=(se_side, se_side), mode="nearest")
    return np.maximum(frame - opened, 0.0)


def max_median(frame, win: int = 5) -> np.ndarray:
    """Max-Median background subtraction.

    The background estimate at each pixel is the maximum of the medians of
    the four 1-D lines (horizontal, vertical, both diagonals) of length
    `win` through it; line-shaped structure survives into the estimate in at
    least one direction and cancels, while point targets do not.
    """
    frame = as_frame(frame)
    if win < 3 or win % 2 == 0:
        raise ValueError(f"win must be odd and >= 3, got {win}")
    footprints = (
        np.ones((1, win), dtype=bool),
        np.ones((win, 1), dtype=bool),
        np.eye(win, dtype=bool),
        np.fliplr(np.eye(win, dtype=bool)),
    )
    estimate = None
    for fp in footprints:
        med = ndimage.median_filter(frame, footprint=fp, mode="nearest")
        estimate = med if estimate is None else np.maximum(estimate, med)
    return np.maximum(frame - estimate, 0.0)


def _gaussian_blur_kernel(sigma: float) -> np.ndarray:
    """Sampled 2-D Gaussian, truncated at 3 sigma, normalized to sum 1."""
    radius = max(math.ceil(3.0 * sigma), 1)
    coords = np.arange(-radius, radius + 1, dtype=np.float64)
    gauss_1d = np.exp(-(coords * coords) / (2.0 * sigma * sigma))
    kernel = np.outer(gauss_1d, gauss_1d)
    return kernel / kernel.sum()


def dog(frame, sigma1: float = 1.0, sigma2: float = 2.5) -> np.ndarray:
    """Difference of Gaussians band-pass: blur(sigma1) - blur(sigma2)."""
    frame = as_frame(frame)
    if not 0 < sigma1 < sigma2:
        raise ValueError(f"need 0 < sigma1 < sigma2, got {sigma1}, {sigma2}")
    narrow = convolve(frame, _gaussian_blur_kernel(sigma1))
    wide = convolve(frame, _gaussian_blur_kernel(sigma2))
    return np.maximum(narrow - wide, 0.0)
