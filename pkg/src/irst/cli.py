"""Command-line front end: detect, mgd, baseline, synth, eval, roc, rings.

Conventions shared by every subcommand:

* config and scene-spec files are flat ``key = value`` text with ``#``
  comments; CSV outputs always carry a header row and use ``.`` decimals;
* every file-writing run drops a RunManifest (``<output>.manifest.txt`` next
  to a file output, ``manifest.txt`` inside a directory output) recording the
  tool version, argv, resolved configuration, inputs, and outputs — re-running
  the recorded argv reproduces the outputs byte for byte;
* outputs are written atomically (temp file + rename);
* exit status 0 on success, 1 with a one-line diagnostic on failure.

Saliency maps are saved both as normalized 8-bit PGM (for inspection) and,
where requested, as raw-value CSV grids; the roc subcommand consumes the raw
CSV grids so thresholds stay comparable across frames.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import shlex
import sys
import tempfile

import numpy as np

from . import __version__
from .baselines import dog, max_median, tophat
from .detector import DetectorConfig, run_pipeline
from .evaluation import read_gt_csv, roc_curve, scrg
from .frames import load_frame, save_frame
from .mgd import mgd_map
from .rings import ring_family, ring_kernel
from .synth import load_scene_spec, render_sequence


def _atomic_write_bytes(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".irst-tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_text(path: str, text: str) -> None:
    _atomic_write_bytes(path, text.encode("utf-8"))


def _atomic_save_frame(frame, path: str, normalize: bool) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".irst-tmp-")
    os.close(fd)
    try:
        save_frame(frame, tmp, normalize=normalize)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _map_csv_text(values: np.ndarray) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    for row in values:
        writer.writerow([repr(float(v)) for v in row])
    return out.getvalue()


def _load_map_csv(path: str) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    return np.asarray(rows, dtype=np.float64)


def _write_manifest(anchor: str, subcommand: str, argv, config_items, inputs, outputs):
    """Manifest next to `anchor` (a file output, or a directory output)."""
    if os.path.isdir(anchor):
        path = os.path.join(anchor, "manifest.txt")
    else:
        path = anchor + ".manifest.txt"
    lines = [
        f"subcommand = {subcommand}",
        f"version = {__version__}",
        f"argv = {shlex.join(argv)}",
    ]
    lines += [f"config.{key} = {value}" for key, value in config_items]
    lines += [f"input.{i} = {p}" for i, p in enumerate(inputs)]
    lines += [f"output.{i} = {p}" for i, p in enumerate(outputs)]
    _atomic_write_text(path, "\n".join(lines) + "\n")


def read_manifest_argv(path: str):
    """Recorded argv from a manifest, for byte-identical replay."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            key, _, value = line.partition("=")
            if key.strip() == "argv":
                return shlex.split(value.strip())
    raise ValueError(f"{path}: no argv line")


def _read_kv_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: malformed config line {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key] = value
    return out


def _load_detector_config(path: str | None) -> DetectorConfig:
    if path is None:
        return DetectorConfig()
    raw = _read_kv_file(path)
    kwargs = {}
    for key in ("ring_radius", "scale_rings", "otsu_bins"):
        if key in raw:
            kwargs[key] = int(raw.pop(key))
    if "segment_k" in raw:
        kwargs["segment_k"] = float(raw.pop("segment_k"))
    low = float(raw.pop("sigma_clamp_low", DetectorConfig.sigma_clamp[0]))
    high = float(raw.pop("sigma_clamp_high", DetectorConfig.sigma_clamp[1]))
    kwargs["sigma_clamp"] = (low, high)
    if raw:
        raise ValueError(f"{path}: unknown config keys {sorted(raw)}")
    return DetectorConfig(**kwargs)


def _config_items(config: DetectorConfig):
    return [
        ("ring_radius", config.ring_radius),
        ("scale_rings", config.scale_rings),
        ("sigma_clamp_low", config.sigma_clamp[0]),
        ("sigma_clamp_high", config.sigma_clamp[1]),
        ("segment_k", config.segment_k),
        ("otsu_bins", config.otsu_bins),
    ]


def _input_frames(path: str):
    """(name, frame) pairs from one PGM file or a directory of them."""
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.lower().endswith(".pgm"))
        if not names:
            raise FileNotFoundError(f"{path}: no .pgm files")
        return [(os.path.splitext(n)[0], load_frame(os.path.join(path, n))) for n in names]
    return [(os.path.splitext(os.path.basename(path))[0], load_frame(path))]


def _cmd_detect(args, argv) -> int:
    config = _load_detector_config(args.config)
    frames = _input_frames(args.input)
    outputs = [args.out_dets]
    rows = []
    debug_rows = []
    for frame_id, (name, frame) in enumerate(frames):
        result = run_pipeline(
            frame, config, frame_id=frame_id,
            collect_candidates=bool(args.dump_candidates),
        )
        for det in result.detections.detections:
            rows.append([frame_id, det.x, det.y, det.score, det.pixels])
        for cand in result.candidates:
            debug_rows.append([
                frame_id, cand.x, cand.y, cand.sigma, cand.fxx, cand.fyy,
                cand.fxy, cand.lambda1, cand.lambda2, cand.isotropy,
            ])
        if args.dump_maps:
            os.makedirs(args.dump_maps, exist_ok=True)
            for stem, values in (("mgd", result.saliency), ("dprime", result.constrained)):
                pgm_path = os.path.join(args.dump_maps, f"{name}.{stem}.pgm")
                csv_path = os.path.join(args.dump_maps, f"{name}.{stem}.csv")
                _atomic_save_frame(values, pgm_path, normalize=True)
                _atomic_write_text(csv_path, _map_csv_text(values))
                outputs += [pgm_path, csv_path]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["frame_id", "x", "y", "score", "pixels"])
    writer.writerows(rows)
    _atomic_write_text(args.out_dets, out.getvalue())
    if args.dump_candidates:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["frame_id", "x", "y", "sigma", "fxx", "fyy", "fxy",
             "lambda1", "lambda2", "I"]
        )
        for row in debug_rows:
            writer.writerow(["" if v is None else v for v in row])
        _atomic_write_text(args.dump_candidates, out.getvalue())
        outputs.append(args.dump_candidates)
    _write_manifest(
        args.out_dets, "detect", argv, _config_items(config), [args.input], outputs
    )
    return 0


def _save_map_outputs(values, args, argv, subcommand, config_items) -> int:
    outputs = [args.out_map]
    _atomic_save_frame(values, args.out_map, normalize=True)
    if args.out_csv:
        _atomic_write_text(args.out_csv, _map_csv_text(values))
        outputs.append(args.out_csv)
    _write_manifest(args.out_map, subcommand, argv, config_items, [args.input], outputs)
    return 0


def _cmd_mgd(args, argv) -> int:
    frame = load_frame(args.input)
    values = mgd_map(frame, ring_family(args.max_radius))
    return _save_map_outputs(
        values, args, argv, "mgd", [("max_radius", args.max_radius)]
    )


def _cmd_baseline(args, argv) -> int:
    frame = load_frame(args.input)
    if args.method == "tophat":
        values = tophat(frame, se_side=args.se_side)
        items = [("method", "tophat"), ("se_side", args.se_side)]
    elif args.method == "maxmedian":
        values = max_median(frame, win=args.win)
        items = [("method", "maxmedian"), ("win", args.win)]
    else:
        values = dog(frame, sigma1=args.sigma1, sigma2=args.sigma2)
        items = [("method", "dog"), ("sigma1", args.sigma1), ("sigma2", args.sigma2)]
    return _save_map_outputs(values, args, argv, "baseline", items)


def _cmd_synth(args, argv) -> int:
    spec = load_scene_spec(args.spec)
    rendered = render_sequence(spec, args.frames, velocity=tuple(args.velocity))
    os.makedirs(args.out_dir, exist_ok=True)
    outputs = []
    truths = []
    for index, (frame, truth) in enumerate(rendered):
        path = os.path.join(args.out_dir, f"frame_{index:04d}.pgm")
        _atomic_save_frame(frame, path, normalize=False)
        outputs.append(path)
        truths.append(truth)
    gt_path = os.path.join(args.out_dir, "gt.csv")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["frame_id", "x", "y"])
    for truth in truths:
        for x, y in truth.targets:
            writer.writerow([truth.frame_id, x, y])
    _atomic_write_text(gt_path, out.getvalue())
    outputs.append(gt_path)
    items = [
        ("spec", args.spec),
        ("frames", args.frames),
        ("velocity", f"{args.velocity[0]},{args.velocity[1]}"),
        ("seed", spec.seed),
    ]
    _write_manifest(args.out_dir, "synth", argv, items, [args.spec], outputs)
    return 0


def _cmd_eval(args, argv) -> int:
    truths = read_gt_csv(args.gt)
    frames = _input_frames(args.inputs_dir)
    map_names = sorted(
        n for n in os.listdir(args.maps_dir) if n.lower().endswith(".csv")
    )
    if len(frames) != len(truths) or len(map_names) != len(truths):
        raise ValueError(
            f"frame/map/ground-truth counts differ: {len(frames)}/{len(map_names)}/{len(truths)}"
        )
    rows = []
    for (_, frame), map_name, truth in zip(frames, map_names, truths):
        values = _load_map_csv(os.path.join(args.maps_dir, map_name))
        report = scrg(frame, values, truth.targets[0])
        rows.append((args.method, truth.frame_id, report))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["method", "frame_id", "scr_in", "scr_out", "scrg"])
    for method, frame_id, report in rows:
        writer.writerow([method, frame_id, report.scr_in, report.scr_out, report.scrg])
    _atomic_write_text(args.out, out.getvalue())
    _write_manifest(
        args.out,
        "eval",
        argv,
        [("method", args.method)],
        [args.inputs_dir, args.maps_dir, args.gt],
        [args.out],
    )
    return 0


def _cmd_roc(args, argv) -> int:
    truths = read_gt_csv(args.gt)
    names = sorted(n for n in os.listdir(args.maps_dir) if n.lower().endswith(".csv"))
    if len(names) != len(truths):
        raise ValueError(f"map/ground-truth counts differ: {len(names)}/{len(truths)}")
    maps = [_load_map_csv(os.path.join(args.maps_dir, n)) for n in names]
    curve = roc_curve(maps, truths, levels=args.levels)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["threshold", "pd", "pf"])
    for point in curve:
        writer.writerow([point.threshold, point.pd, point.pf])
    _atomic_write_text(args.out, out.getvalue())
    _write_manifest(
        args.out,
        "roc",
        argv,
        [("levels", args.levels)],
        [args.maps_dir, args.gt],
        [args.out],
    )
    return 0


def _ring_grid_text(radius: int) -> str:
    ring = ring_kernel(radius)
    count = len(ring.members)
    lines = [f"ring R={radius}  members={count}  weight=1/{count}"]
    for row in ring.kernel:
        lines.append(" ".join("." if v == 0 else f"1/{count}" for v in row))
    return "\n".join(lines)


def _cmd_rings(args, argv) -> int:
    text = "\n\n".join(_ring_grid_text(r) for r in range(args.max_radius + 1)) + "\n"
    if args.out:
        _atomic_write_text(args.out, text)
        _write_manifest(
            args.out, "rings", argv, [("max_radius", args.max_radius)], [], [args.out]
        )
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irst",
        description="Single-frame infrared small-target detection toolkit",
    )
    parser.add_argument("--version", action="version", version=f"irst {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("detect", help="run the full detector on a PGM frame or directory")
    p.add_argument("--input", required=True, help="PGM file or directory of PGM frames")
    p.add_argument("--config", help="detector config file (key = value)")
    p.add_argument("--out-dets", required=True, help="detections CSV path")
    p.add_argument("--dump-maps", help="directory for saliency/constrained map dumps")
    p.add_argument(
        "--dump-candidates",
        help="per-candidate debug CSV (x, y, sigma, Hessian entries, eigenvalues, I)",
    )
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("mgd", help="ring-difference saliency map of one frame")
    p.add_argument("--input", required=True)
    p.add_argument("--out-map", required=True, help="normalized PGM output")
    p.add_argument("--out-csv", help="raw map values as CSV grid")
    p.add_argument("--max-radius", type=int, default=4)
    p.set_defaults(func=_cmd_mgd)

    p = sub.add_parser("baseline", help="classical baseline saliency map")
    p.add_argument("--method", required=True, choices=["tophat", "maxmedian", "dog"])
    p.add_argument("--input", required=True)
    p.add_argument("--out-map", required=True)
    p.add_argument("--out-csv")
    p.add_argument("--se-side", type=int, default=5)
    p.add_argument("--win", type=int, default=5)
    p.add_argument("--sigma1", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=2.5)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("synth", help="render a ground-truthed synthetic sequence")
    p.add_argument("--spec", required=True, help="scene spec file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--frames", type=int, default=1)
    p.add_argument(
        "--velocity", type=float, nargs=2, default=(0.0, 0.0), metavar=("DX", "DY")
    )
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("eval", help="SCR/SCRG report for maps against ground truth")
    p.add_argument("--inputs-dir", required=True, help="directory of input PGM frames")
    p.add_argument("--maps-dir", required=True, help="directory of raw map CSV grids")
    p.add_argument("--gt", required=True, help="ground-truth CSV")
    p.add_argument("--out", required=True, help="report CSV path")
    p.add_argument("--method", default="method", help="method label for the report")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("roc", help="ROC curve from raw map CSV grids")
    p.add_argument("--maps-dir", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--levels", type=int, default=100)
    p.set_defaults(func=_cmd_roc)

    p = sub.add_parser("rings", help="dump ring masks as text grids")
    p.add_argument("--max-radius", type=int, default=4)
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(func=_cmd_rings)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, list(argv))
    except Exception as exc:
        print(f"irst: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
