"""Hessian eigen-analysis at candidate points.

Second partial derivatives of the image are taken as correlations with
sampled second derivatives of a 2-D Gaussian,

    Gxx = -(1 / 2 pi sigma^4) (1 - x^2 / sigma^2) exp(-(x^2 + y^2) / 2 sigma^2)
    Gyy =  Gxx with x and y swapped
    Gxy =  (x y / 2 pi sigma^6) exp(-(x^2 + y^2) / 2 sigma^2)

sampled at integer offsets, truncated at 3 sigma (side at least 5), with no
renormalization: the analytic values apply as-is. From the eigenvalues the
isotropy ratio I = min(|l1|, |l2|) / max(|l1|, |l2|) in [0, 1] measures how
blob-like the local surface is: near 1 for rotationally symmetric caps, near
0 for ridges and edges. A bright cap additionally has both eigenvalues
negative (negative-definite Hessian), which the detector gates on.

Because the scale varies per candidate, derivatives are evaluated as small
per-point dot products rather than whole-image convolutions; kernel sets are
cached per sigma rounded to 1e-3.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .frames import as_frame


@dataclass(frozen=True)
class DerivativeKernelSet:
    sigma: float
    gxx: np.ndarray
    gyy: np.ndarray
    gxy: np.ndarray


@dataclass(frozen=True)
class HessianSample:
    fxx: float
    fyy: float
    fxy: float
    lambda1: float  # lambda1 >= lambda2
    lambda2: float
    isotropy: float  # in [0, 1]; the 0/0 case is defined as 0

    @property
    def negative_definite(self) -> bool:
        return self.lambda1 < 0 and self.lambda2 < 0


def derivative_kernels(sigma: float) -> DerivativeKernelSet:
    """Sampled Gaussian second-derivative kernels at the given scale."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = max(math.ceil(3.0 * sigma), 2)
    coords = np.arange(-radius, radius + 1, dtype=np.float64)
    xs = coords[np.newaxis, :]  # column offsets
    ys = coords[:, np.newaxis]  # row offsets
    s2 = sigma * sigma
    envelope = np.exp(-(xs * xs + ys * ys) / (2.0 * s2))
    norm = 1.0 / (2.0 * math.pi * s2 * s2)
    gxx = -norm * (1.0 - xs * xs / s2) * envelope
    gyy = -norm * (1.0 - ys * ys / s2) * envelope
    gxy = (xs * ys / (2.0 * math.pi * s2 * s2 * s2)) * envelope
    return DerivativeKernelSet(sigma=float(sigma), gxx=gxx, gyy=gyy, gxy=gxy)


_kernel_cache: dict[float, DerivativeKernelSet] = {}
_kernel_cache_lock = threading.Lock()


def cached_kernels(sigma: float) -> DerivativeKernelSet:
    """Shared read-only kernel cache keyed by sigma rounded to 1e-3."""
    key = round(float(sigma), 3)
    kernels = _kernel_cache.get(key)
    if kernels is None:
        kernels = derivative_kernels(key)
        with _kernel_cache_lock:
            _kernel_cache.setdefault(key, kernels)
    return kernels


def eigenvalues(fxx: float, fyy: float, fxy: float) -> tuple:
    """Eigenvalues (lambda1, lambda2) of [[fxx, fxy], [fxy, fyy]], lambda1 >= lambda2."""
    root = math.sqrt((fxx - fyy) ** 2 + 4.0 * fxy * fxy)
    return (fxx + fyy + root) / 2.0, (fxx + fyy - root) / 2.0


def isotropy_ratio(lambda1: float, lambda2: float) -> float:
    """min(|l1|, |l2|) / max(|l1|, |l2|); 0 when both eigenvalues are 0."""
    a1, a2 = abs(lambda1), abs(lambda2)
    top = max(a1, a2)
    if top == 0.0:
        return 0.0
    return min(a1, a2) / top


def _point_response(frame: np.ndarray, x: int, y: int, kernel: np.ndarray) -> float:
    """Correlation of the frame with the kernel at one pixel, replicate-padded."""
    radius = kernel.shape[0] // 2
    height, width = frame.shape
    rows = np.clip(np.arange(y - radius, y + radius + 1), 0, height - 1)
    cols = np.clip(np.arange(x - radius, x + radius + 1), 0, width - 1)
    patch = frame[np.ix_(rows, cols)]
    return float(np.sum(patch * kernel))


def hessian_at(frame, x: int, y: int, kernels: DerivativeKernelSet) -> HessianSample:
    """Hessian sample of the frame at (x, y) using the given kernel set."""
    frame = as_frame(frame)
    height, width = frame.shape
    if not (0 <= x < width and 0 <= y < height):
        raise ValueError(f"point ({x}, {y}) outside {width}x{height} frame")
    fxx = _point_response(frame, x, y, kernels.gxx)
    fyy = _point_response(frame, x, y, kernels.gyy)
    fxy = _point_response(frame, x, y, kernels.gxy)
    lam1, lam2 = eigenvalues(fxx, fyy, fxy)
    return HessianSample(
        fxx=fxx,
        fyy=fyy,
        fxy=fxy,
        lambda1=lam1,
        lambda2=lam2,
        isotropy=isotropy_ratio(lam1, lam2),
    )
