"""Detection metrics: SCR, SCRG, matching, and ROC curves by threshold sweep.

SCR = |I_t - mu_B| / sigma_B with I_t the max over a small box at the target,
and mu_B, sigma_B the mean and population standard deviation of a surrounding
background frame that excludes the target box. SCRG = SCR_out / SCR_in.

A detection matches a truth when its half-up-rounded centroid falls in the
3x3 neighborhood centered on the truth; each truth takes at most one
detection (highest score wins). Detection rate Pd = detected / true targets;
false-alarm rate Pf = false-alarm *pixels* / image pixels, both summed over
the frames of a sequence before dividing.

The ROC sweep thresholds each saliency map from high to low (quantiles of
the pooled positive values plus a below-minimum endpoint) and emits the
monotone staircase envelope of the raw per-threshold rates, so thresholds
are strictly decreasing and Pf never decreases along the curve.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .detector import DetectionSet, extract_components
from .rings import round_half_up


@dataclass(frozen=True)
class GroundTruth:
    frame_id: int
    targets: tuple  # (x, y) integer positions
    notes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EvalReport:
    scr_in: float
    scr_out: float
    scrg: float  # scr_out / scr_in; nan when scr_in == 0


class RocPoint(NamedTuple):
    threshold: float
    pd: float
    pf: float


def _scr_regions(shape, x, y, target_side, bg_width):
    height, width = shape
    if not (0 <= x < width and 0 <= y < height):
        raise ValueError(f"target ({x}, {y}) outside {width}x{height} image")
    half = target_side // 2
    outer = half + bg_width
    if x - outer < 0 or x + outer >= width or y - outer < 0 or y + outer >= height:
        warnings.warn(
            f"SCR window at ({x}, {y}) clipped at the image border", stacklevel=3
        )
    rows = np.arange(max(y - outer, 0), min(y + outer + 1, height))
    cols = np.arange(max(x - outer, 0), min(x + outer + 1, width))
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    in_target = (np.abs(rr - y) <= half) & (np.abs(cc - x) <= half)
    return rr, cc, in_target


def scr(image, target_xy, target_side: int = 5, bg_width: int = 10) -> float:
    """Signal-to-clutter ratio at a known target position.

    Returns inf when the background is perfectly uniform (sigma_B = 0).
    """
    image = np.asarray(image, dtype=np.float64)
    x, y = target_xy
    rr, cc, in_target = _scr_regions(image.shape, x, y, target_side, bg_width)
    window = image[rr, cc]
    peak = float(window[in_target].max())
    background = window[~in_target]
    mu = float(background.mean())
    sigma = float(background.std())
    if sigma == 0.0:
        return math.inf
    return abs(peak - mu) / sigma


def scrg(
    input_frame,
    output_map,
    target_xy,
    target_side: int = 5,
    bg_width: int = 10,
) -> EvalReport:
    """SCR gain of a filter: output-map SCR over input-frame SCR."""
    input_frame = np.asarray(input_frame, dtype=np.float64)
    output_map = np.asarray(output_map, dtype=np.float64)
    if input_frame.shape != output_map.shape:
        raise ValueError("input frame and output map dimensions differ")
    scr_in = scr(input_frame, target_xy, target_side, bg_width)
    scr_out = scr(output_map, target_xy, target_side, bg_width)
    if scr_in == 0.0:
        gain = math.nan
    else:
        gain = scr_out / scr_in
    return EvalReport(scr_in=scr_in, scr_out=scr_out, scrg=gain)


def match_detections(detections: DetectionSet, truth: GroundTruth):
    """(matched truth count, false-alarm pixel count) under the 3x3 rule.

    Detections are considered in descending score order (position breaks
    ties), so the result does not depend on input list order; a detection
    whose rounded centroid is within the 3x3 neighborhood of an unmatched
    truth claims the nearest such truth.
    """
    ordered = sorted(detections.detections, key=lambda d: (-d.score, d.y, d.x))
    unmatched = list(range(len(truth.targets)))
    n_detected = 0
    false_pixels = 0
    for det in ordered:
        rx, ry = round_half_up(det.x), round_half_up(det.y)
        best = None
        for idx in unmatched:
            tx, ty = truth.targets[idx]
            if abs(rx - tx) <= 1 and abs(ry - ty) <= 1:
                d2 = (rx - tx) ** 2 + (ry - ty) ** 2
                if best is None or (d2, idx) < best[:2]:
                    best = (d2, idx)
        if best is not None:
            unmatched.remove(best[1])
            n_detected += 1
        else:
            false_pixels += det.pixels
    return n_detected, false_pixels


def _rates_at_threshold(maps, truths, threshold, pixel_counts):
    total_detected = 0
    total_targets = 0
    total_false = 0
    total_pixels = 0
    for values, truth, n_pixels in zip(maps, truths, pixel_counts):
        components = extract_components(values, values > threshold)
        dets = DetectionSet(frame_id=truth.frame_id, detections=components)
        n_detected, false_pixels = match_detections(dets, truth)
        total_detected += n_detected
        total_targets += len(truth.targets)
        total_false += false_pixels
        total_pixels += n_pixels
    pd = total_detected / total_targets if total_targets else 0.0
    pf = total_false / total_pixels if total_pixels else 0.0
    return pd, pf


def roc_curve(maps, truths, frame_dims=None, levels: int = 100):
    """ROC points for one method over a ground-truthed map sequence.

    `maps` and `truths` pair up frame by frame. `frame_dims` overrides the
    per-frame pixel count (width, height); by default each map's own shape
    is used. Thresholds sweep `levels` quantiles of the pooled positive map
    values from high to low, ending below the global minimum so the final
    point segments everything.
    """
    if len(maps) == 0 or len(maps) != len(truths):
        raise ValueError("need an equal, nonzero number of maps and truths")
    maps = [np.asarray(m, dtype=np.float64) for m in maps]
    if frame_dims is not None:
        width, height = frame_dims
        pixel_counts = [width * height] * len(maps)
    else:
        pixel_counts = [m.size for m in maps]

    pooled = np.concatenate([m[m > 0] for m in maps])
    global_min = min(float(m.min()) for m in maps)
    endpoint = float(np.nextafter(global_min, -np.inf))
    if pooled.size:
        qs = np.linspace(1.0, 0.0, levels)
        thresholds = np.unique(np.quantile(pooled, qs))[::-1]
        thresholds = [float(t) for t in thresholds if t > endpoint]
    else:
        thresholds = []
    thresholds.append(endpoint)

    points = []
    best_pd = 0.0
    best_pf = 0.0
    for threshold in thresholds:
        pd, pf = _rates_at_threshold(maps, truths, threshold, pixel_counts)
        best_pd = max(best_pd, pd)
        best_pf = max(best_pf, pf)
        points.append(RocPoint(threshold=threshold, pd=best_pd, pf=best_pf))
    return points


def detection_rate_at(curve, pf: float) -> float:
    """Best Pd the curve achieves at false-alarm rate <= pf (0 if none)."""
    rates = [p.pd for p in curve if p.pf <= pf]
    return max(rates) if rates else 0.0


def write_gt_csv(path, truths) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame_id", "x", "y"])
        for truth in truths:
            for x, y in truth.targets:
                writer.writerow([truth.frame_id, x, y])


def read_gt_csv(path):
    """Ground truths grouped by frame_id, in ascending frame order."""
    grouped: dict[int, list] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            frame_id = int(row["frame_id"])
            grouped.setdefault(frame_id, []).append(
                (int(row["x"]), int(row["y"]))
            )
    return [
        GroundTruth(frame_id=fid, targets=tuple(grouped[fid]))
        for fid in sorted(grouped)
    ]


def write_roc_csv(path, curve) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "pd", "pf"])
        for point in curve:
            writer.writerow([point.threshold, point.pd, point.pf])


def write_report_csv(path, rows) -> None:
    """Rows of (method, frame_id, EvalReport)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "frame_id", "scr_in", "scr_out", "scrg"])
        for method, frame_id, report in rows:
            writer.writerow(
                [method, frame_id, report.scr_in, report.scr_out, report.scrg]
            )
