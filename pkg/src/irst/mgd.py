"""Multilayer gray difference (MGD) saliency.

Per pixel, consecutive ring means are differenced from the inside out; each
positive difference contributes its square, negative differences are gated
off. Bright compact structure (center brighter than every surrounding ring)
therefore responds strongly, flat or dark structure not at all.

The map is computed with whole-image array operations, no per-pixel window
loops. Ring means enter through their contrast against the center pixel,
mu_E(R) - f, accumulated from replicate-padded shifted differences; the
consecutive-mean differences then read

    mu_E(R-1) - mu_E(R) = (mu_E(R-1) - f) - (mu_E(R) - f),

identical algebra, but every shifted difference on a constant frame is
exactly 0.0, so a constant frame yields an exactly zero map instead of
accumulating rounding dust.
"""

from __future__ import annotations

import numpy as np

from .frames import as_frame
from .rings import RingFamily, ring_family


def step_gate(x: float) -> float:
    """Heaviside gate: 1.0 for x > 0, else 0.0 (strict at zero)."""
    return 1.0 if x > 0 else 0.0


def _ring_contrast_maps(frame: np.ndarray, family: RingFamily):
    """Maps of mu_E(R) - frame for R = 0..max_radius (the R = 0 map is zero)."""
    radius = family.max_radius
    padded = np.pad(frame, radius, mode="edge")
    height, width = frame.shape
    contrasts = [np.zeros_like(frame)]
    for ring in family.rings[1:]:
        acc = np.zeros_like(frame)
        for di, dj in ring.members:
            shifted = padded[
                radius + di : radius + di + height, radius + dj : radius + dj + width
            ]
            acc += shifted - frame
        contrasts.append(acc / len(ring.members))
    return contrasts


def mgd_map(frame, family: RingFamily | None = None) -> np.ndarray:
    """Sum of squared, positively gated differences of consecutive ring means.

    The default family uses rings 0..4 (a 9x9 window). Output is
    non-negative, same shape as the input, and scales as a^2 under
    f -> a*f + b for a > 0.
    """
    frame = as_frame(frame)
    if family is None:
        family = ring_family()
    if family.max_radius < 1:
        raise ValueError("family must contain at least ring 1")
    contrasts = _ring_contrast_maps(frame, family)
    out = np.zeros_like(frame)
    for r in range(1, family.max_radius + 1):
        diff = contrasts[r - 1] - contrasts[r]
        gated = np.where(diff > 0, diff, 0.0)
        out += gated * gated
    return out
