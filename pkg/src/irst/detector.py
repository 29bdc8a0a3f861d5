"""End-to-end detector: saliency -> Otsu gate -> per-candidate isotropy constraint
-> segmentation -> connected components -> centroids.

The constraint stage keeps a salient pixel only if a local Gaussian scale can
be estimated there, the Hessian at that scale is negative definite (a bright
cap), and then attenuates the saliency by the isotropy ratio:

    D'(x, y) = D(x, y) * I(x, y) * [l1 < 0] * [l2 < 0]   where D(x, y) > TH

with TH the Otsu threshold of the saliency map; everything at or below TH is
zeroed. D' <= D everywhere.

Candidate pixels are independent, so the constraint loop is data-parallel;
the IRST_THREADS environment variable caps the worker count (0 or unset =
one worker per CPU). Output is identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .frames import as_frame
from .mgd import mgd_map
from .hessian import cached_kernels, hessian_at
from .rings import ring_family, ring_means
from .scale import DEFAULT_SIGMA_CLAMP, estimate_sigma, profile_from_maps

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class DetectorConfig:
    ring_radius: int = 4  # saliency rings 0..ring_radius (9x9 window)
    scale_rings: int = 3  # scale profile rho(1)..rho(n); background at n+1
    sigma_clamp: tuple = DEFAULT_SIGMA_CLAMP
    segment_k: float = 5.0  # final mask: D' > mean + k*std over positive D'
    otsu_bins: int = 256

    def __post_init__(self):
        if self.ring_radius < self.scale_rings + 1:
            raise ValueError(
                f"ring_radius ({self.ring_radius}) must be >= scale_rings + 1 "
                f"({self.scale_rings + 1})"
            )
        if not self.segment_k > 0:
            raise ValueError(f"segment_k must be positive, got {self.segment_k}")
        if self.scale_rings < 1:
            raise ValueError(f"scale_rings must be >= 1, got {self.scale_rings}")
        low, high = self.sigma_clamp
        if not 0 < low <= high:
            raise ValueError(f"invalid sigma_clamp {self.sigma_clamp}")


@dataclass(frozen=True)
class Detection:
    x: float  # saliency-weighted centroid, x = column
    y: float
    score: float  # component max of D'
    pixels: int  # component size


@dataclass(frozen=True)
class DetectionSet:
    frame_id: int
    detections: tuple  # Detection, sorted by descending score

    def __len__(self):
        return len(self.detections)


@dataclass(frozen=True)
class CandidateDebug:
    """Per-candidate trace of the constraint stage (None = scale invalid)."""

    x: int
    y: int
    sigma: float | None
    fxx: float | None
    fyy: float | None
    fxy: float | None
    lambda1: float | None
    lambda2: float | None
    isotropy: float | None


@dataclass(frozen=True)
class PipelineResult:
    detections: DetectionSet
    saliency: np.ndarray  # raw MGD map D
    constrained: np.ndarray  # D' after the isotropy constraint
    salient_threshold: float  # Otsu TH over D
    segment_threshold: float  # mean + k*std threshold over positive D'
    candidates: tuple = ()  # CandidateDebug rows when collected


def worker_count() -> int:
    """Worker cap from IRST_THREADS (0 or unset/invalid = one per CPU)."""
    raw = os.environ.get("IRST_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return max(n, 1)


def otsu_threshold(values, bins: int = 256) -> float:
    """Between-class-variance-maximizing threshold over equal-width bins.

    Returns the upper edge of the winning bin (ties broken toward the lowest
    threshold). A map with fewer than two distinct values returns its max, so
    a strict > comparison gates everything off.
    """
    flat = np.asarray(values, dtype=np.float64).ravel()
    vmin, vmax = float(flat.min()), float(flat.max())
    if vmin == vmax:
        return vmax
    counts, edges = np.histogram(flat, bins=bins, range=(vmin, vmax))
    centers = (edges[:-1] + edges[1:]) / 2.0
    total = counts.sum()
    w0 = np.cumsum(counts)[:-1]  # class 0 = bins 0..k for k = 0..bins-2
    w1 = total - w0
    moments = np.cumsum(counts * centers)[:-1]
    grand = float((counts * centers).sum())
    with np.errstate(invalid="ignore", divide="ignore"):
        mu0 = moments / w0
        mu1 = (grand - moments) / w1
        between = w0.astype(np.float64) * w1 * (mu0 - mu1) ** 2
    between[(w0 == 0) | (w1 == 0)] = 0.0
    best = int(np.argmax(between))  # argmax takes the first, i.e. lowest edge
    return float(edges[best + 1])


def _constrain_pixel(frame, mean_maps, saliency, x, y, config):
    profile = profile_from_maps(mean_maps, x, y, config.scale_rings)
    estimate = estimate_sigma(profile, clamp=config.sigma_clamp)
    if not estimate.valid:
        trace = CandidateDebug(x, y, None, None, None, None, None, None, None)
        return 0.0, trace
    sample = hessian_at(frame, x, y, cached_kernels(estimate.sigma))
    trace = CandidateDebug(
        x, y, estimate.sigma, sample.fxx, sample.fyy, sample.fxy,
        sample.lambda1, sample.lambda2, sample.isotropy,
    )
    if not sample.negative_definite:
        return 0.0, trace
    return float(saliency[y, x]) * sample.isotropy, trace


def apply_isotropic_constraint(
    frame, saliency, config: DetectorConfig | None = None, collect_candidates=False
):
    """Constrained saliency map D' (and the Otsu threshold used).

    Returns (constrained_map, salient_threshold), plus a tuple of
    CandidateDebug rows when `collect_candidates` is set.
    """
    frame = as_frame(frame)
    saliency = np.asarray(saliency, dtype=np.float64)
    if saliency.shape != frame.shape:
        raise ValueError("saliency map and frame dimensions differ")
    if config is None:
        config = DetectorConfig()

    threshold = otsu_threshold(saliency, bins=config.otsu_bins)
    out = np.zeros_like(saliency)
    ys, xs = np.nonzero(saliency > threshold)
    if len(ys) == 0:
        if collect_candidates:
            return out, threshold, ()
        return out, threshold

    mean_maps = ring_means(frame, ring_family(config.scale_rings + 1))
    points = list(zip(xs.tolist(), ys.tolist()))

    def run_chunk(chunk):
        return [
            _constrain_pixel(frame, mean_maps, saliency, x, y, config)
            for x, y in chunk
        ]

    workers = min(worker_count(), len(points))
    if workers <= 1:
        results = run_chunk(points)
    else:
        step = max(1, -(-len(points) // (workers * 4)))
        chunks = [points[i : i + step] for i in range(0, len(points), step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(run_chunk, chunks) for r in part]

    out[ys, xs] = [value for value, _ in results]
    if collect_candidates:
        return out, threshold, tuple(trace for _, trace in results)
    return out, threshold


def extract_components(values, mask):
    """8-connected components of `mask` as Detection tuples.

    Centroid is the value-weighted center of mass, score the component max,
    sorted by descending score (position breaks ties deterministically).
    """
    labels, count = ndimage.label(mask, structure=EIGHT_CONNECTED)
    if count == 0:
        return ()
    index = np.arange(1, count + 1)
    rows_grid, cols_grid = np.indices(mask.shape)
    pixels = ndimage.sum_labels(mask, labels, index)
    weights = ndimage.sum_labels(values, labels, index)
    scores = ndimage.maximum(values, labels, index)
    wx = ndimage.sum_labels(values * cols_grid, labels, index)
    wy = ndimage.sum_labels(values * rows_grid, labels, index)
    # plain pixel mean for degenerate all-zero components
    px = ndimage.sum_labels(cols_grid, labels, index)
    py = ndimage.sum_labels(rows_grid, labels, index)
    positive = weights > 0
    cx = np.where(positive, wx / np.where(positive, weights, 1), px / pixels)
    cy = np.where(positive, wy / np.where(positive, weights, 1), py / pixels)
    detections = [
        Detection(x=float(x), y=float(y), score=float(s), pixels=int(n))
        for x, y, s, n in zip(cx, cy, scores, pixels)
    ]
    detections.sort(key=lambda d: (-d.score, d.y, d.x))
    return tuple(detections)


def segment_and_extract(
    constrained, config: DetectorConfig | None = None, frame_id: int = 0
):
    """Threshold the constrained map and extract component centroids.

    The binary mask is D' > mean + k*std, statistics over the strictly
    positive values of D' (population std); an all-zero map yields an empty
    set. Returns (DetectionSet, segment_threshold).
    """
    if config is None:
        config = DetectorConfig()
    constrained = np.asarray(constrained, dtype=np.float64)
    positive = constrained[constrained > 0]
    if positive.size == 0:
        return DetectionSet(frame_id=frame_id, detections=()), float("inf")
    threshold = float(positive.mean() + config.segment_k * positive.std())
    mask = constrained > threshold
    detections = extract_components(constrained, mask)
    return DetectionSet(frame_id=frame_id, detections=detections), threshold


def run_pipeline(
    frame,
    config: DetectorConfig | None = None,
    frame_id: int = 0,
    collect_candidates=False,
):
    """Full pipeline with intermediate maps exposed for evaluation."""
    if config is None:
        config = DetectorConfig()
    frame = as_frame(frame)
    saliency = mgd_map(frame, ring_family(config.ring_radius))
    constrained, salient_threshold, candidates = apply_isotropic_constraint(
        frame, saliency, config, collect_candidates=True
    )
    detections, segment_threshold = segment_and_extract(
        constrained, config, frame_id=frame_id
    )
    return PipelineResult(
        detections=detections,
        saliency=saliency,
        constrained=constrained,
        salient_threshold=salient_threshold,
        segment_threshold=segment_threshold,
        candidates=candidates if collect_candidates else (),
    )


def detect(frame, config: DetectorConfig | None = None, frame_id: int = 0) -> DetectionSet:
    """Detections for one frame (composition of the pipeline stages)."""
    return run_pipeline(frame, config, frame_id=frame_id).detections
