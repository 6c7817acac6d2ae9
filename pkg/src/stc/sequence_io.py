"""Image-sequence ingestion, ground-truth files and result/diagnostic output.

Sequences follow the OTB layout: a directory holding ``img/`` (or the frames
directly) and ``groundtruth_rect.txt`` with one 1-based ``x,y,w,h`` rectangle
per line.
"""

import os
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .exceptions import EmptySequenceError, InvalidInputError, ParseError
from .tracker import BoundingBox

GROUNDTRUTH_NAME = "groundtruth_rect.txt"
IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".pgm"}
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

_SEPARATOR = re.compile(r"\s*,\s*|\s+")


@dataclass(frozen=True)
class SequenceManifest:
    frame_paths: tuple
    groundtruth: tuple = None
    name: str = ""

    def __post_init__(self):
        if not self.frame_paths:
            raise EmptySequenceError(f"sequence {self.name!r} has no frames")
        if self.groundtruth is not None and len(self.groundtruth) != len(self.frame_paths):
            raise ParseError(
                f"ground truth has {len(self.groundtruth)} boxes but the sequence "
                f"has {len(self.frame_paths)} frames"
            )

    def __len__(self):
        return len(self.frame_paths)


def parse_groundtruth(text):
    """Parse 1-based ``x,y,w,h`` lines into 0-based boxes."""
    boxes = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        fields = _SEPARATOR.split(line)
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}: {line!r}", line=lineno)
        try:
            x, y, w, h = (float(f) for f in fields)
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", line=lineno) from None
        if not (w > 0 and h > 0):
            raise ParseError(f"width and height must be positive in {line!r}", line=lineno)
        boxes.append(BoundingBox(x - 1.0, y - 1.0, w, h))
    return boxes


def format_box(box):
    return f"{box.x + 1.0:.2f},{box.y + 1.0:.2f},{box.w:.2f},{box.h:.2f}"


def write_results(path, boxes):
    """Write boxes as 1-based ``x,y,w,h`` lines with two decimals."""
    with open(path, "w") as fh:
        for box in boxes:
            fh.write(format_box(box) + "\n")


def _frames_dir(directory):
    img = directory / "img"
    return img if img.is_dir() else directory


def load_sequence(directory, pattern=None):
    """Collect frame paths (sorted) and optional ground truth for a sequence.

    Frames are taken from ``directory/img`` when that exists, else from
    ``directory`` itself. Without ``pattern`` every supported image file is
    used.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"sequence directory not found: {directory}")
    frames_dir = _frames_dir(directory)
    if pattern is None:
        paths = [p for p in frames_dir.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES]
    else:
        paths = [p for p in frames_dir.glob(pattern) if p.is_file()]
    paths = sorted(paths, key=lambda p: p.name)
    if not paths:
        raise EmptySequenceError(
            f"no frames matching {pattern or 'supported image types'} in {frames_dir}"
        )
    groundtruth = None
    for candidate in (directory / GROUNDTRUTH_NAME, frames_dir / GROUNDTRUTH_NAME):
        if candidate.is_file():
            groundtruth = tuple(parse_groundtruth(candidate.read_text()))
            break
    return SequenceManifest(
        frame_paths=tuple(str(p) for p in paths),
        groundtruth=groundtruth,
        name=directory.resolve().name,
    )


def to_grayscale(r, g=None, b=None):
    """ITU-R 601 luma of three channel grids; a lone grid passes through."""
    r = np.asarray(r, dtype=float)
    if g is None and b is None:
        return r
    g = np.asarray(g, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (r.shape == g.shape == b.shape):
        raise InvalidInputError(f"channel shapes differ: {r.shape}, {g.shape}, {b.shape}")
    wr, wg, wb = LUMA_WEIGHTS
    return wr * r + wg * g + wb * b


def load_frame(path):
    """Decode an image file into a float grayscale frame in [0, 255]."""
    path = Path(path)
    if path.suffix.lower() not in IMAGE_SUFFIXES:
        raise InvalidInputError(
            f"unsupported image type {path.suffix!r} for {path}; "
            f"expected one of {', '.join(sorted(IMAGE_SUFFIXES))}"
        )
    with Image.open(path) as im:
        if im.mode in ("L", "F"):
            return np.asarray(im, dtype=float)
        if im.mode.startswith("I"):
            arr = np.asarray(im, dtype=float)
            # 16-bit grayscale
            return arr * (255.0 / 65535.0) if arr.max() > 255 else arr
        rgb = np.asarray(im.convert("RGB"), dtype=float)
    return to_grayscale(rgb[..., 0], rgb[..., 1], rgb[..., 2])


def iter_frames(manifest):
    for path in manifest.frame_paths:
        yield load_frame(path)


def save_frame(path, frame):
    arr = np.clip(np.rint(np.asarray(frame, dtype=float)), 0, 255).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path)


def save_sequence(directory, frames, boxes=None, digits=4):
    """Write frames as ``img/0001.png...`` plus ground truth, OTB style."""
    directory = Path(directory)
    img = directory / "img"
    img.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(frames, 1):
        save_frame(img / f"{i:0{digits}d}.png", frame)
    if boxes is not None:
        write_results(directory / GROUNDTRUTH_NAME, boxes)
    return directory


def _normalize_u8(grid):
    grid = np.asarray(grid, dtype=float)
    lo, hi = float(grid.min()), float(grid.max())
    if hi <= lo:
        return np.zeros(grid.shape, dtype=np.uint8)
    return np.rint(255.0 * (grid - lo) / (hi - lo)).astype(np.uint8)


def dump_confidence(conf, path):
    """Write a confidence map as a min-max normalized binary PGM."""
    grid = getattr(conf, "grid", conf)
    if np.size(grid) == 0:
        raise InvalidInputError("cannot dump an empty confidence map")
    data = _normalize_u8(grid)
    h, w = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


def write_overlay(path, frame, box, truth=None):
    """Save the frame as PNG with the tracked box (and optional truth) drawn."""
    base = Image.fromarray(np.clip(np.rint(frame), 0, 255).astype(np.uint8), mode="L").convert("RGB")
    draw = ImageDraw.Draw(base)
    if truth is not None:
        draw.rectangle(_corners(truth), outline=(0, 255, 0))
    draw.rectangle(_corners(box), outline=(255, 0, 0))
    base.save(path)


def _corners(box):
    return [box.x, box.y, box.x + box.w - 1, box.y + box.h - 1]


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return Path(path)
