"""Concentric ring neighborhoods and their normalized averaging kernels.

A ring of radius R is the set of integer offsets whose rounded Euclidean
distance from the origin equals R (rounding is half-up). Ring 0 is the
center pixel alone; rings partition the disc neighborhood, and member
counts for R = 0..4 are 1, 8, 12, 16, 32. Each ring kernel carries uniform
weight 1/count on its members, so kernels sum exactly to 1 and a ring-mean
map is one whole-image convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frames import as_frame, convolve

DEFAULT_MAX_RADIUS = 4  # rings of a 9x9 window


def round_half_up(x: float) -> int:
    """Round to nearest integer with halves going up (2.5 -> 3)."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class RingKernel:
    radius: int
    members: tuple  # (di, dj) = (row, col) offsets, row-major order
    kernel: np.ndarray  # side 2R+1, weight 1/len(members) at members


@dataclass(frozen=True)
class RingFamily:
    max_radius: int
    rings: tuple  # RingKernel for R = 0..max_radius


def ring_members(radius: int):
    """All integer offsets at rounded Euclidean distance `radius`, row-major.

    Offsets outside [-R, R]^2 are at distance >= R+1 and can never round to
    R, so scanning that square is exhaustive.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    out = []
    for di in range(-radius, radius + 1):
        for dj in range(-radius, radius + 1):
            if round_half_up(math.hypot(di, dj)) == radius:
                out.append((di, dj))
    return out


def ring_kernel(radius: int) -> RingKernel:
    """Uniform averaging mask over the ring of the given radius."""
    members = ring_members(radius)
    side = 2 * radius + 1
    weights = np.zeros((side, side), dtype=np.float64)
    w = 1.0 / len(members)
    for di, dj in members:
        weights[di + radius, dj + radius] = w
    return RingKernel(radius=radius, members=tuple(members), kernel=weights)


def ring_family(max_radius: int = DEFAULT_MAX_RADIUS) -> RingFamily:
    if max_radius < 1:
        raise ValueError(f"max_radius must be >= 1, got {max_radius}")
    return RingFamily(
        max_radius=max_radius,
        rings=tuple(ring_kernel(r) for r in range(max_radius + 1)),
    )


def ring_means(frame, family: RingFamily):
    """Ring-mean maps for R = 0..max_radius as whole-image convolutions.

    The R = 0 map is the frame itself (the center pixel is its own mean).
    """
    frame = as_frame(frame)
    maps = [frame.copy()]
    for ring in family.rings[1:]:
        maps.append(convolve(frame, ring.kernel))
    return maps
