"""Ground-truthed synthetic infrared scenes.

Scenes compose additively: a background (flat, or filtered noise = seeded
white noise smoothed to a configurable correlation length and rescaled to a
requested standard deviation), clutter primitives chosen to exercise the
anisotropy discrimination (ridges, step edges, corners, blocks) plus an
isotropic-blob decoy that is deliberately indistinguishable from a real
target in a single frame, then Gaussian point targets

    A * exp(-((x - xt)^2 + (y - yt)^2) / (2 sigma^2))

and white sensor noise. Clipping to the representable range happens last and
is flagged in the ground truth's notes, as is target/clutter overlap, so SCR
bookkeeping downstream can see saturation.

Everything is a pure function of the spec (including its seed): the same
spec renders bit-identical frames.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import special

from .evaluation import GroundTruth
from .frames import as_frame, convolve
from .rings import round_half_up

CLUTTER_KINDS = ("ridge", "edge", "corner", "block", "blob")


@dataclass(frozen=True)
class GaussianTargetSpec:
    x: float
    y: float
    amplitude: float
    sigma: float
    background: float = 0.0

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class ClutterSpec:
    kind: str
    x: float
    y: float
    amplitude: float
    sigma: float = 1.5  # cross-section width / transition softness
    angle: float = 0.0  # degrees; crest direction (ridge) or normal (edge)
    length: float | None = None  # ridge crest length; None spans the frame
    width: float = 12.0  # block extent
    height: float = 12.0

    def __post_init__(self):
        if self.kind not in CLUTTER_KINDS:
            raise ValueError(f"unknown clutter kind {self.kind!r}; use {CLUTTER_KINDS}")


@dataclass(frozen=True)
class SceneSpec:
    width: int
    height: int
    background: str = "flat"  # "flat" | "noise"
    background_level: float = 50.0
    background_noise_std: float = 5.0
    noise_corr_length: float = 2.0
    sensor_noise_std: float = 0.0
    seed: int = 0
    targets: tuple = ()
    clutter: tuple = ()
    clip: tuple = (0.0, 65535.0)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"bad dims {self.width}x{self.height}")
        if self.background not in ("flat", "noise"):
            raise ValueError(f"background must be flat or noise, got {self.background!r}")


def _grid(dims):
    width, height = dims
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    return xs, ys


def _bump(xs, ys, x, y, amplitude, sigma):
    d2 = (xs - x) ** 2 + (ys - y) ** 2
    return amplitude * np.exp(-d2 / (2.0 * sigma * sigma))


def _smooth_step(signed, softness):
    return 0.5 * (1.0 + special.erf(signed / (softness * math.sqrt(2.0))))


def clutter_field(spec: ClutterSpec, dims) -> np.ndarray:
    """Additive intensity field of one clutter primitive."""
    xs, ys = _grid(dims)
    dx, dy = xs - spec.x, ys - spec.y
    if spec.kind == "blob":
        return _bump(xs, ys, spec.x, spec.y, spec.amplitude, spec.sigma)
    cos_a = math.cos(math.radians(spec.angle))
    sin_a = math.sin(math.radians(spec.angle))
    if spec.kind == "ridge":
        along = dx * cos_a + dy * sin_a
        perp = -dx * sin_a + dy * cos_a
        crest = np.exp(-(perp * perp) / (2.0 * spec.sigma**2))
        if spec.length is not None:
            over = np.maximum(np.abs(along) - spec.length / 2.0, 0.0)
            crest *= np.exp(-(over * over) / (2.0 * (2.0 * spec.sigma) ** 2))
        return spec.amplitude * crest
    if spec.kind == "edge":
        signed = dx * cos_a + dy * sin_a  # angle is the bright-side normal
        return spec.amplitude * _smooth_step(signed, spec.sigma)
    if spec.kind == "corner":
        return spec.amplitude * _smooth_step(dx, spec.sigma) * _smooth_step(dy, spec.sigma)
    # block: smoothed rectangle centered at (x, y)
    inside_x = _smooth_step(spec.width / 2.0 - np.abs(dx), spec.sigma)
    inside_y = _smooth_step(spec.height / 2.0 - np.abs(dy), spec.sigma)
    return spec.amplitude * inside_x * inside_y


def render_target(target: GaussianTargetSpec, dims) -> np.ndarray:
    """Pointwise evaluation of the Gaussian target model over the frame grid."""
    xs, ys = _grid(dims)
    return _bump(xs, ys, target.x, target.y, target.amplitude, target.sigma) + target.background


def _filtered_noise(rng, dims, corr_length, std):
    width, height = dims
    white = rng.standard_normal((height, width))
    if corr_length > 0:
        radius = max(math.ceil(3.0 * corr_length), 1)
        coords = np.arange(-radius, radius + 1, dtype=np.float64)
        g = np.exp(-(coords**2) / (2.0 * corr_length**2))
        kernel = np.outer(g, g)
        kernel /= kernel.sum()
        white = convolve(white, kernel)
    spread = white.std()
    if spread > 0:
        white *= std / spread
    return white


def render_scene(spec: SceneSpec):
    """Render one scene; returns (frame, GroundTruth).

    Ground-truth positions are the half-up-rounded target centers. notes
    carries "clipped" (any saturation at the final clip) and "overlap" (some
    clutter primitive contributes noticeably at a target center).
    """
    rng = np.random.default_rng(spec.seed)
    dims = (spec.width, spec.height)
    if spec.background == "noise":
        frame = spec.background_level + _filtered_noise(
            rng, dims, spec.noise_corr_length, spec.background_noise_std
        )
    else:
        frame = np.full((spec.height, spec.width), spec.background_level, dtype=np.float64)

    clutter_total = np.zeros_like(frame)
    for clutter in spec.clutter:
        clutter_total += clutter_field(clutter, dims)
    frame = frame + clutter_total

    xs, ys = _grid(dims)
    for target in spec.targets:
        frame += _bump(xs, ys, target.x, target.y, target.amplitude, target.sigma)

    if spec.sensor_noise_std > 0:
        frame += rng.normal(0.0, spec.sensor_noise_std, size=frame.shape)

    low, high = spec.clip
    clipped = bool(np.any(frame < low) or np.any(frame > high))
    frame = np.clip(frame, low, high)

    positions = []
    overlap = False
    for target in spec.targets:
        px, py = round_half_up(target.x), round_half_up(target.y)
        if not (0 <= px < spec.width and 0 <= py < spec.height):
            raise ValueError(f"target center ({target.x}, {target.y}) outside frame")
        positions.append((px, py))
        if clutter_total[py, px] > 0.05 * target.amplitude:
            overlap = True

    truth = GroundTruth(
        frame_id=0,
        targets=tuple(positions),
        notes={"clipped": clipped, "overlap": overlap},
    )
    return as_frame(frame), truth


def render_sequence(spec: SceneSpec, frames: int, velocity=(0.0, 0.0)):
    """Per-frame scenes with the targets translated by `velocity` each frame.

    Noise is fresh per frame (seed = base seed + frame index). Raises if any
    target's trajectory leaves the frame.
    """
    if frames < 1:
        raise ValueError(f"frames must be >= 1, got {frames}")
    dx, dy = velocity
    for index in range(frames):
        for target in spec.targets:
            x, y = target.x + dx * index, target.y + dy * index
            if not (0 <= x <= spec.width - 1 and 0 <= y <= spec.height - 1):
                raise ValueError(
                    f"target trajectory exits the frame at frame {index}: ({x}, {y})"
                )
    out = []
    for index in range(frames):
        moved = tuple(
            replace(t, x=t.x + dx * index, y=t.y + dy * index) for t in spec.targets
        )
        frame_spec = replace(spec, targets=moved, seed=spec.seed + index)
        frame, truth = render_scene(frame_spec)
        out.append((frame, replace(truth, frame_id=index)))
    return out


def _coerce(value: str):
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


def parse_scene_text(text: str) -> SceneSpec:
    """Scene spec from flat key = value lines.

    `target = k=v ...` and `clutter = <kind> k=v ...` lines may repeat; `#`
    starts a comment.
    """
    scalars: dict = {}
    targets = []
    clutter = []
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed scene spec line: {raw_line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "target":
            fields = dict(
                (k, _coerce(v)) for k, v in (tok.split("=", 1) for tok in value.split())
            )
            targets.append(GaussianTargetSpec(**fields))
        elif key == "clutter":
            tokens = value.split()
            fields = dict(
                (k, _coerce(v)) for k, v in (tok.split("=", 1) for tok in tokens[1:])
            )
            clutter.append(ClutterSpec(kind=tokens[0], **fields))
        elif key in ("clip_low", "clip_high"):
            scalars[key] = float(value)
        else:
            scalars[key] = _coerce(value)
    low = scalars.pop("clip_low", 0.0)
    high = scalars.pop("clip_high", 65535.0)
    return SceneSpec(targets=tuple(targets), clutter=tuple(clutter), clip=(low, high), **scalars)


def load_scene_spec(path) -> SceneSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_scene_text(fh.read())
