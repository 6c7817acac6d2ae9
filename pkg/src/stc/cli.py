"""Command line entry point: ``stc {track,eval,synth,bench}``."""

import argparse
import os
import statistics
import sys
import tempfile
import time
import warnings
from pathlib import Path

from . import __version__, metrics, sequence_io, synth, tracker
from .exceptions import InvalidInputError

MANIFEST_NAME = "run-manifest.txt"
RESULTS_NAME = "results.txt"
METRICS_NAME = "metrics.csv"

# CLI flag -> TrackerParams field
PARAM_FLAGS = {
    "alpha": "alpha",
    "beta": "beta",
    "rho": "rho",
    "lambda": "lam",
    "n_scale": "n_scale_frames",
    "epsilon": "epsilon",
}

PARAM_HELP = {
    "alpha": "confidence map scale (default 2.25)",
    "beta": "confidence map shape (default 1.0)",
    "rho": "model learning rate in (0, 1) (default 0.075)",
    "lambda": "scale filter gain in (0, 1) (default 0.25)",
    "n_scale": "scale estimates averaged per update (default 5)",
    "epsilon": "deconvolution regularization floor (default 1e-6)",
}


class UsageError(Exception):
    pass


def _parse_box(text):
    try:
        x, y, w, h = (float(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y,W,H, got {text!r}") from None
    if w <= 0 or h <= 0:
        raise argparse.ArgumentTypeError(f"box width and height must be positive: {text!r}")
    return (x, y, w, h)


def _parse_size(text):
    try:
        w, h = (float(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected W,H, got {text!r}") from None
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError(f"target size must be at least 1x1: {text!r}")
    return (w, h)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--out", default="stc-out", help="output directory")
    common.add_argument("--manifest", help="reuse settings from a previous run-manifest")
    common.add_argument("--seed", type=int, default=0, help="seed for synthetic data (default 0)")
    for flag in PARAM_FLAGS:
        kind = int if flag == "n_scale" else float
        common.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=kind, default=None,
                            help=PARAM_HELP[flag])

    seq = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    seq.add_argument("--seq", help="sequence directory (OTB layout)")
    seq.add_argument("--pattern", default=None, help="frame glob inside the sequence")
    seq.add_argument("--dump-confidence", action="store_true",
                     help="write each confidence map as confidence/NNNN.pgm")
    seq.add_argument("--overlay", action="store_true",
                     help="write frames with the tracked (red) and true (green) boxes as overlay/NNNN.png")

    parser = argparse.ArgumentParser(prog="stc", allow_abbrev=False,
                                     description="Spatio-temporal context tracker")
    parser.add_argument("--version", action="version", version=f"stc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("track", parents=[common, seq], allow_abbrev=False,
                       help="track a sequence from an initial box")
    p.add_argument("--init", type=_parse_box, help="initial box X,Y,W,H (1-based)")

    sub.add_parser("eval", parents=[common, seq], allow_abbrev=False,
                   help="track from ground truth frame 1 and report CLE / SR / FPS")

    p = sub.add_parser("synth", parents=[common], allow_abbrev=False,
                       help="write a synthetic preset sequence to disk")
    p.add_argument("--preset", default="translation-100",
                   help=f"one of: {', '.join(sorted(synth.PRESETS))}")

    p = sub.add_parser("bench", parents=[common], allow_abbrev=False,
                       help="measure tracking throughput on an in-memory sequence")
    p.add_argument("--frames", type=int, default=200, help="frames per run (default 200)")
    p.add_argument("--runs", type=_positive_int, default=7, help="timed runs, at least 5 (default 7)")
    p.add_argument("--warmup", type=int, default=1, help="untimed runs first (default 1)")
    p.add_argument("--box", type=_parse_size, default=(40.0, 20.0),
                   help="target size as W,H (default 40,20 -> 80x40 context window)")
    return parser


def read_manifest(path):
    values = {}
    for line in Path(path).read_text().splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def write_manifest(out_dir, entries):
    path = Path(out_dir) / MANIFEST_NAME
    with open(path, "w") as fh:
        for key, value in entries.items():
            fh.write(f"{key}={value}\n")
    return path


def _apply_manifest(args):
    if not args.manifest:
        return
    values = read_manifest(args.manifest)
    for flag in PARAM_FLAGS:
        if getattr(args, flag, None) is None and flag in values:
            kind = int if flag == "n_scale" else float
            setattr(args, flag, kind(values[flag]))
    if getattr(args, "seq", "unset") is None and "seq" in values:
        args.seq = values["seq"]
    if getattr(args, "pattern", "unset") is None and values.get("pattern") not in (None, "", "None"):
        args.pattern = values["pattern"]
    if getattr(args, "init", "unset") is None and values.get("init") not in (None, "", "None"):
        args.init = _parse_box(values["init"])


def make_params(args):
    overrides = {PARAM_FLAGS[f]: getattr(args, f) for f in PARAM_FLAGS if getattr(args, f) is not None}
    return tracker.TrackerParams(**overrides)


def _manifest_entries(args, params, extra=()):
    entries = {"command": args.command, "version": __version__}
    for key in ("seq", "pattern", "preset"):
        if hasattr(args, key):
            entries[key] = getattr(args, key)
    entries.update({
        "alpha": repr(params.alpha),
        "beta": repr(params.beta),
        "rho": repr(params.rho),
        "lambda": repr(params.lam),
        "n_scale": params.n_scale_frames,
        "epsilon": repr(params.epsilon),
        "window_ratio": repr(params.window_ratio),
        "scale_clamp": f"{params.scale_clamp[0]!r},{params.scale_clamp[1]!r}",
        "seed": args.seed,
    })
    entries.update(extra)
    return entries


def run_tracker(frames, init_box, params, on_frame=None):
    """Track ``frames`` from ``init_box``; returns (boxes, seconds spent tracking)."""
    frames = iter(frames)
    first = next(frames)
    t0 = time.perf_counter()
    state = tracker.init(first, init_box, params)
    elapsed = time.perf_counter() - t0
    boxes = [init_box]
    if on_frame:
        on_frame(0, first, init_box, None)
    for i, frame in enumerate(frames, 1):
        t0 = time.perf_counter()
        state, box, conf = tracker.track(state, frame)
        elapsed += time.perf_counter() - t0
        boxes.append(box)
        if on_frame:
            on_frame(i, frame, box, conf)
    return boxes, elapsed


def _atomic_write_results(path, boxes):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".results-", suffix=".tmp")
    os.close(fd)
    try:
        sequence_io.write_results(tmp, boxes)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _track_sequence(args, init_box, truth=None):
    params = make_params(args)
    manifest = sequence_io.load_sequence(args.seq, args.pattern)
    out = sequence_io.ensure_dir(args.out)
    if args.dump_confidence:
        sequence_io.ensure_dir(out / "confidence")
    if args.overlay:
        sequence_io.ensure_dir(out / "overlay")

    def on_frame(i, frame, box, conf):
        if args.dump_confidence and conf is not None:
            sequence_io.dump_confidence(conf, out / "confidence" / f"{i + 1:04d}.pgm")
        if args.overlay:
            gt = truth[i] if truth is not None else None
            sequence_io.write_overlay(out / "overlay" / f"{i + 1:04d}.png", frame, box, gt)

    hook = on_frame if (args.dump_confidence or args.overlay) else None
    boxes, elapsed = run_tracker(sequence_io.iter_frames(manifest), init_box, params, hook)
    _atomic_write_results(out / RESULTS_NAME, boxes)
    fps = len(boxes) / elapsed if elapsed > 0 else float("inf")
    write_manifest(out, _manifest_entries(args, params, {
        "init": sequence_io.format_box(init_box),
        "frames": len(boxes),
        "results": RESULTS_NAME,
    }))
    print(f"rho={params.rho!r} alpha={params.alpha!r} beta={params.beta!r} "
          f"lambda={params.lam!r} n_scale={params.n_scale_frames} epsilon={params.epsilon!r}")
    print(f"frames={len(boxes)} time={elapsed:.3f}s fps={fps:.1f}")
    return manifest, boxes, elapsed


def run_track(args):
    if not args.seq:
        raise UsageError("track requires --seq")
    if args.init is not None:
        x, y, w, h = args.init
        init_box = tracker.BoundingBox(x - 1.0, y - 1.0, w, h)
    else:
        gt = sequence_io.load_sequence(args.seq, args.pattern).groundtruth
        if gt is None:
            raise UsageError("no --init box given and the sequence has no ground truth")
        init_box = gt[0]
    _track_sequence(args, init_box)
    return 0


def run_eval(args):
    if not args.seq:
        raise UsageError("eval requires --seq")
    manifest = sequence_io.load_sequence(args.seq, args.pattern)
    if manifest.groundtruth is None:
        raise InvalidInputError(f"sequence {args.seq} has no {sequence_io.GROUNDTRUTH_NAME}")
    truth = manifest.groundtruth
    manifest, boxes, elapsed = _track_sequence(args, truth[0], truth)
    summary = metrics.summarize(manifest.name, boxes, truth, max(elapsed, 1e-9))
    text = metrics.summary_csv([summary])
    (Path(args.out) / METRICS_NAME).write_text(text)
    sys.stdout.write(text)
    return 0


def run_synth(args):
    frames, boxes, spec = synth.generate_preset(args.preset, seed=args.seed)
    out = sequence_io.save_sequence(args.out, frames, boxes)
    write_manifest(out, {"command": "synth", "preset": args.preset, "seed": args.seed,
                         "frames": len(frames), "version": __version__})
    print(f"wrote {len(frames)} frames of preset {args.preset!r} to {out}")
    return 0


def bench(frames, box, params, runs=7, warmup=1):
    """Per-run FPS (init + all frames) over ``runs`` timed passes."""
    rates = []
    for i in range(warmup + runs):
        _, elapsed = run_tracker(frames, box, params)
        if i >= warmup:
            rates.append(len(frames) / elapsed)
    return rates


def run_bench(args):
    if args.frames < 1:
        raise UsageError(f"--frames must be at least 1, got {args.frames}")
    if args.runs < 5:
        raise UsageError("--runs must be at least 5")
    params = make_params(args)
    w, h = args.box
    frame_size = (320, 240)
    traj = synth.random_walk(args.frames, (160.0, 120.0), 3.0, frame_size,
                             margin=max(w, h), seed=args.seed)
    spec = synth.SynthSpec(frame_size=frame_size, patch_size=(int(w), int(h)),
                           trajectory=traj, noise_sigma=2.0, seed=args.seed)
    frames, boxes = synth.gen_translation_sequence(spec)
    rates = bench(frames, boxes[0], params, runs=args.runs, warmup=args.warmup)
    window = (round(params.window_ratio * w), round(params.window_ratio * h))
    q = statistics.quantiles(rates, n=4) if len(rates) > 1 else [rates[0]] * 3
    out = sequence_io.ensure_dir(args.out)
    report = (
        f"window={window[0]}x{window[1]} frames={args.frames} runs={args.runs}\n"
        f"median_fps={statistics.median(rates):.1f} min_fps={min(rates):.1f} "
        f"max_fps={max(rates):.1f} iqr_fps={q[2] - q[0]:.1f}\n"
    )
    (out / "bench.txt").write_text(report)
    write_manifest(out, _manifest_entries(args, params, {"frames": args.frames, "runs": args.runs}))
    sys.stdout.write(report)
    return 0


COMMANDS = {"track": run_track, "eval": run_eval, "synth": run_synth, "bench": run_bench}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_manifest(args)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except Exception as exc:  # noqa: BLE001 - every module error becomes an exit status
        print(f"stc {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
