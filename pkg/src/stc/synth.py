"""Deterministic synthetic sequences with exact ground truth.

A fixed random texture patch is rendered on a textured background along a
prescribed trajectory, optionally zoomed and partially occluded. Sizes are
``(width, height)``; centers are ``(x, y)``. Pixel ``k`` covers ``[k, k+1)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .exceptions import InvalidSpecError
from .tracker import BoundingBox

MAX_OCCLUSION = 0.9


@dataclass(frozen=True)
class SynthSpec:
    frame_size: tuple = (320, 240)
    patch_size: tuple = (40, 40)
    trajectory: tuple = ((160.0, 120.0),)
    scale_track: tuple = None
    # each entry: ((first_frame, last_frame), fraction), frames 0-based inclusive
    occlusion_windows: tuple = ()
    noise_sigma: float = 0.0
    seed: int = 0
    occluder_value: float = 100.0

    def __post_init__(self):
        if self.scale_track is None:
            object.__setattr__(self, "scale_track", (1.0,) * len(self.trajectory))
        if len(self.trajectory) == 0:
            raise InvalidSpecError("trajectory is empty")
        if len(self.scale_track) != len(self.trajectory):
            raise InvalidSpecError(
                f"trajectory has {len(self.trajectory)} points but scale_track has {len(self.scale_track)}"
            )
        if any(s <= 0 for s in self.scale_track):
            raise InvalidSpecError("scale_track values must be positive")
        if self.noise_sigma < 0:
            raise InvalidSpecError("noise_sigma must be non-negative")

    @property
    def n_frames(self):
        return len(self.trajectory)


def _streams(seed):
    texture, background, noise = np.random.SeedSequence(seed).spawn(3)
    return (np.random.default_rng(texture), np.random.default_rng(background),
            np.random.default_rng(noise))


def make_texture(size, rng):
    """Smoothed random texture in roughly [40, 220]."""
    w, h = size
    raw = ndimage.gaussian_filter(rng.standard_normal((h, w)), 1.2, mode="wrap")
    raw /= raw.std()
    return np.clip(130.0 + 45.0 * raw, 0.0, 255.0)


def make_background(size, rng):
    """Low-frequency gradient plus faint fixed speckle."""
    w, h = size
    rows, cols = np.mgrid[0:h, 0:w]
    ramp = 90.0 + 30.0 * cols / max(w - 1, 1) + 20.0 * rows / max(h - 1, 1)
    speckle = ndimage.gaussian_filter(rng.standard_normal((h, w)), 1.0)
    speckle /= speckle.std()
    return ramp + 4.0 * speckle


def _place(frame, patch, center, scale, occlusion=0.0, occluder_value=0.0):
    ph, pw = patch.shape
    fh, fw = frame.shape
    bw, bh = pw * scale, ph * scale
    x0, y0 = center[0] - bw / 2.0, center[1] - bh / 2.0
    c_lo, c_hi = max(int(np.floor(x0)), 0), min(int(np.ceil(x0 + bw)), fw)
    r_lo, r_hi = max(int(np.floor(y0)), 0), min(int(np.ceil(y0 + bh)), fh)
    if c_lo >= c_hi or r_lo >= r_hi:
        return
    rows = np.arange(r_lo, r_hi) + 0.5
    cols = np.arange(c_lo, c_hi) + 0.5
    # pixel centers inside the box take bilinearly resampled patch values
    inside_r = (rows >= y0) & (rows < y0 + bh)
    inside_c = (cols >= x0) & (cols < x0 + bw)
    u = (cols - x0) / scale - 0.5
    v = (rows - y0) / scale - 0.5
    vv, uu = np.meshgrid(v, u, indexing="ij")
    values = ndimage.map_coordinates(patch, [vv, uu], order=1, mode="nearest")
    if occlusion > 0:
        covered = cols < x0 + occlusion * bw
        values[:, covered] = occluder_value
    mask = inside_r[:, None] & inside_c[None, :]
    region = frame[r_lo:r_hi, c_lo:c_hi]
    region[mask] = values[mask]


def _occlusion_at(spec, t):
    frac = 0.0
    for (first, last), fraction in spec.occlusion_windows:
        if first <= t <= last:
            frac = max(frac, fraction)
    return frac


def _render(spec, occlude):
    tex_rng, bg_rng, noise_rng = _streams(spec.seed)
    patch = make_texture(spec.patch_size, tex_rng)
    background = make_background(spec.frame_size, bg_rng)
    fw, fh = spec.frame_size
    pw, ph = spec.patch_size
    frames, boxes = [], []
    for t, (center, scale) in enumerate(zip(spec.trajectory, spec.scale_track)):
        box = BoundingBox.from_center(center, pw * scale, ph * scale)
        if box.x >= fw or box.y >= fh or box.x + box.w <= 0 or box.y + box.h <= 0:
            raise InvalidSpecError(f"frame {t}: patch at {center} lies fully outside the frame")
        frame = background.copy()
        occlusion = _occlusion_at(spec, t) if occlude else 0.0
        _place(frame, patch, center, scale, occlusion, spec.occluder_value)
        if spec.noise_sigma > 0:
            frame += noise_rng.normal(0.0, spec.noise_sigma, frame.shape)
        frames.append(np.clip(frame, 0.0, 255.0))
        boxes.append(box)
    return frames, boxes


def gen_translation_sequence(spec):
    """Translate the patch along ``spec.trajectory`` at unit scale."""
    if any(s != 1.0 for s in spec.scale_track):
        raise InvalidSpecError("translation sequences require scale_track of all 1.0")
    return _render(spec, occlude=False)


def gen_zoom_sequence(spec):
    """Render the patch at ``scale_track[t] * patch_size`` on frame ``t``."""
    return _render(spec, occlude=False)


def gen_occlusion_sequence(spec):
    """Cover a fraction of the patch, from its left edge, during each window."""
    for window, fraction in spec.occlusion_windows:
        if not 0.0 <= fraction <= MAX_OCCLUSION:
            raise InvalidSpecError(
                f"occlusion fraction {fraction} outside [0, {MAX_OCCLUSION}] for frames {window}"
            )
    return _render(spec, occlude=True)


def random_walk(n_frames, start, max_step, frame_size, margin, seed=0):
    """Random walk with steps uniform in a disc of radius ``max_step``.

    Steps that would carry the center within ``margin`` of the frame border
    are reflected back inward.
    """
    rng = np.random.default_rng(seed)
    w, h = frame_size
    lo = np.array([margin, margin], dtype=float)
    hi = np.array([w - margin, h - margin], dtype=float)
    pos = np.array(start, dtype=float)
    points = [tuple(pos)]
    for _ in range(n_frames - 1):
        radius = max_step * np.sqrt(rng.uniform())
        angle = rng.uniform(0.0, 2.0 * np.pi)
        step = radius * np.array([np.cos(angle), np.sin(angle)])
        nxt = pos + step
        for i in range(2):
            if nxt[i] < lo[i] or nxt[i] > hi[i]:
                nxt[i] = pos[i] - step[i]
        pos = nxt
        points.append(tuple(pos))
    return tuple(points)


def translation_spec(n_frames=100, noise_sigma=2.0, seed=0):
    frame_size = (320, 240)
    traj = random_walk(n_frames, (160.0, 120.0), 5.0, frame_size, margin=50, seed=seed)
    return SynthSpec(frame_size=frame_size, patch_size=(40, 40), trajectory=traj,
                     noise_sigma=noise_sigma, seed=seed)


def occlusion_spec(n_frames=60, noise_sigma=2.0, seed=0):
    frame_size = (320, 240)
    traj = random_walk(n_frames, (160.0, 120.0), 1.5, frame_size, margin=50, seed=seed)
    return SynthSpec(frame_size=frame_size, patch_size=(40, 40), trajectory=traj,
                     occlusion_windows=(((20, 35), 0.5),), noise_sigma=noise_sigma, seed=seed)


def zoom_spec(n_frames=60, final_scale=1.3, noise_sigma=2.0, seed=0):
    frame_size = (320, 240)
    scales = tuple(np.linspace(1.0, final_scale, n_frames))
    traj = ((160.0, 120.0),) * n_frames
    return SynthSpec(frame_size=frame_size, patch_size=(40, 40), trajectory=traj,
                     scale_track=scales, noise_sigma=noise_sigma, seed=seed)


PRESETS = {
    "translation-100": (gen_translation_sequence, lambda seed: translation_spec(100, seed=seed)),
    "occlusion-60": (gen_occlusion_sequence, lambda seed: occlusion_spec(60, seed=seed)),
    "zoom-60": (gen_zoom_sequence, lambda seed: zoom_spec(60, seed=seed)),
}


def generate_preset(name, seed=0):
    """Return ``(frames, boxes, spec)`` for a named preset."""
    try:
        gen, make = PRESETS[name]
    except KeyError:
        raise InvalidSpecError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    spec = make(seed)
    frames, boxes = gen(spec)
    return frames, boxes, spec
