"""Grayscale frame representation, PGM file I/O, and the shared 2-D convolution engine.

A frame is a 2-D float64 numpy array indexed ``[row, col]``; public (x, y)
coordinates throughout the package mean x = column, y = row. Intensities are
kept in double precision regardless of the source bit depth so that the
derivative and scale arithmetic downstream stays exact.

All convolutions are correlation-style (no kernel flip; every mask used here
is either symmetric or defined directly as drawn) with replicate-edge
padding, so a constant frame convolved with any kernel is exactly constant
times the kernel sum, borders included.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage


class PgmError(ValueError):
    """Raised for malformed, truncated, or unsupported PGM input."""


def as_frame(data) -> np.ndarray:
    """Validate and return a frame as a float64 2-D array.

    Rejects empty dimensions and non-finite intensities.
    """
    frame = np.asarray(data, dtype=np.float64)
    if frame.ndim != 2:
        raise ValueError(f"frame must be 2-D, got shape {frame.shape}")
    if frame.shape[0] < 1 or frame.shape[1] < 1:
        raise ValueError(f"frame must be at least 1x1, got shape {frame.shape}")
    if not np.all(np.isfinite(frame)):
        raise ValueError("frame contains non-finite intensities")
    return frame


def _read_pgm_tokens(raw: bytes, count: int, offset: int):
    """Read `count` whitespace-separated ASCII tokens starting at `offset`.

    Comments (# to end of line) are skipped. Returns (tokens, next_offset).
    """
    tokens = []
    i = offset
    n = len(raw)
    while len(tokens) < count:
        while i < n and raw[i : i + 1].isspace():
            i += 1
        if i < n and raw[i : i + 1] == b"#":
            while i < n and raw[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        if i >= n:
            raise PgmError("truncated PGM header")
        start = i
        while i < n and not raw[i : i + 1].isspace() and raw[i : i + 1] != b"#":
            i += 1
        tokens.append(raw[start:i])
    return tokens, i


def load_frame(path) -> np.ndarray:
    """Load a PGM file (P2 ASCII or P5 binary, maxval <= 65535) as a frame.

    16-bit P5 samples are big-endian per the format; values are returned as
    float64 without truncation.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 2:
        raise PgmError(f"{path}: not a PGM file (too short)")
    magic = raw[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"{path}: unsupported format {magic!r} (expected P2 or P5)")
    try:
        (w_tok, h_tok, max_tok), body_off = _read_pgm_tokens(raw, 3, 2)
        width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    except PgmError:
        raise
    except Exception as exc:
        raise PgmError(f"{path}: malformed PGM header ({exc})") from exc
    if width < 1 or height < 1:
        raise PgmError(f"{path}: invalid dimensions {width}x{height}")
    if not 0 < maxval <= 65535:
        raise PgmError(f"{path}: unsupported maxval {maxval}")
    count = width * height

    if magic == b"P2":
        try:
            tokens, _ = _read_pgm_tokens(raw, count, body_off)
            samples = np.array([int(t) for t in tokens], dtype=np.float64)
        except PgmError:
            raise PgmError(f"{path}: truncated P2 payload (expected {count} samples)")
        except Exception as exc:
            raise PgmError(f"{path}: malformed P2 payload ({exc})") from exc
    else:
        # exactly one whitespace byte separates the header from the raster
        payload = raw[body_off + 1 :]
        bytes_per = 2 if maxval > 255 else 1
        need = count * bytes_per
        if len(payload) < need:
            raise PgmError(
                f"{path}: truncated P5 payload (got {len(payload)} bytes, need {need})"
            )
        dtype = ">u2" if bytes_per == 2 else np.uint8
        samples = np.frombuffer(payload[:need], dtype=dtype).astype(np.float64)

    if np.any(samples > maxval):
        raise PgmError(f"{path}: sample exceeds declared maxval {maxval}")
    return samples.reshape(height, width)


def save_frame(frame, path, normalize: bool = False) -> None:
    """Write a frame as binary PGM (P5).

    With ``normalize`` the intensity range [min, max] is mapped linearly to
    [0, 255] (a constant frame maps to all zeros). Without it, values are
    rounded and clipped to [0, 65535]; maxval is 255 when everything fits in
    a byte, 65535 otherwise (16-bit samples written big-endian), so integral
    frames round-trip exactly through load_frame.
    """
    frame = as_frame(frame)
    if normalize:
        lo, hi = float(frame.min()), float(frame.max())
        if hi > lo:
            scaled = (frame - lo) * (255.0 / (hi - lo))
        else:
            scaled = np.zeros_like(frame)
        samples = np.rint(scaled).astype(np.uint16)
        maxval = 255
    else:
        samples = np.rint(np.clip(frame, 0, 65535)).astype(np.uint16)
        maxval = 255 if samples.max(initial=0) <= 255 else 65535

    height, width = frame.shape
    header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
    if maxval > 255:
        body = samples.astype(">u2").tobytes()
    else:
        body = samples.astype(np.uint8).tobytes()
    with open(path, "wb") as fh:
        fh.write(header + body)


def convolve(frame, kernel) -> np.ndarray:
    """Correlate a frame with a square odd-sided kernel, replicate-edge padded.

    Output has the same dimensions as the input and is deterministic for a
    given (frame, kernel) pair.
    """
    frame = as_frame(frame)
    kernel = np.asarray(kernel, dtype=np.float64)
    if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1]:
        raise ValueError(f"kernel must be square, got shape {kernel.shape}")
    if kernel.shape[0] % 2 != 1:
        raise ValueError(f"kernel side must be odd, got {kernel.shape[0]}")
    return ndimage.correlate(frame, kernel, mode="nearest")
