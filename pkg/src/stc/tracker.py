"""Frame-to-frame spatio-temporal context tracker.

The tracker is a pure state machine: :func:`init` builds a
:class:`TrackerState` from the first frame and :func:`track` maps
``(state, frame)`` to a new state. Nothing is mutated in place.

Coordinates: frames are indexed ``frame[row, col]``; boxes and centers are
``(x, y)`` = ``(col, row)`` in pixels. Window sizes are ``(width, height)``.
"""

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import spectral
from .context import (
    ConfidenceTarget,
    SpatioTemporalModel,
    build_confidence_target,
    build_context_prior,
    compute_confidence,
    learn_spatial_context,
    update_stc,
)
from .exceptions import InvalidInputError, LostConfidenceWarning
from .validation import check_frame


@dataclass(frozen=True)
class BoundingBox:
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise InvalidInputError(f"box must have positive size, got w={self.w}, h={self.h}")

    def center(self):
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @classmethod
    def from_center(cls, center, w, h):
        return cls(center[0] - w / 2.0, center[1] - h / 2.0, w, h)

    def as_tuple(self):
        return (self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class TrackerParams:
    alpha: float = 2.25
    beta: float = 1.0
    rho: float = 0.075
    lam: float = 0.25
    n_scale_frames: int = 5
    window_ratio: float = 2.0
    epsilon: float = 1e-6
    scale_clamp: tuple = (0.5, 2.0)
    initial_scale: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "window_ratio", "initial_scale"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive, got {getattr(self, name)}")
        if self.epsilon < 0:
            raise InvalidInputError(f"epsilon must be non-negative, got {self.epsilon}")
        for name in ("rho", "lam"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise InvalidInputError(f"{name} must lie in (0, 1), got {getattr(self, name)}")
        if int(self.n_scale_frames) != self.n_scale_frames or self.n_scale_frames < 1:
            raise InvalidInputError(f"n_scale_frames must be a positive integer, got {self.n_scale_frames}")
        lo, hi = self.scale_clamp
        if not 0 < lo < 1 < hi:
            raise InvalidInputError(f"scale_clamp must satisfy 0 < min < 1 < max, got {self.scale_clamp}")


@dataclass(frozen=True)
class ScaleState:
    """Scale filter state.

    ``s`` is the filtered per-frame scale ratio and ``sigma`` the current
    Gaussian weight spread. Since every update multiplies ``sigma`` by the
    ratio, ``sigma / sigma_init`` is the accumulated scale of the target.
    """

    s: float
    sigma: float
    sigma_init: float
    history: tuple = ()
    prev_peak: float = None

    @property
    def cumulative(self):
        return self.sigma / self.sigma_init


@dataclass(frozen=True)
class TrackerState:
    center: tuple
    base_box: BoundingBox
    window_size: tuple
    model: SpatioTemporalModel
    scale: ScaleState
    hamming: np.ndarray = field(repr=False)
    target: ConfidenceTarget = field(repr=False)
    params: TrackerParams
    frame_shape: tuple
    frame_index: int = 1

    @property
    def local_center(self):
        """(row, col) of the target inside the context window."""
        w, h = self.window_size
        return (h // 2, w // 2)

    def box(self):
        s = self.scale.cumulative
        return BoundingBox.from_center(self.center, self.base_box.w * s, self.base_box.h * s)


def _round(v):
    return int(math.floor(v + 0.5))


def crop_context_window(frame, center, window_size):
    """Crop a ``window_size`` = (width, height) region centered on ``center``.

    The crop is centered at the pixel nearest to ``center``; anything outside
    the frame is filled by replicating the nearest edge pixel.
    """
    w, h = (int(v) for v in window_size)
    if w < 1 or h < 1:
        raise InvalidInputError(f"window size must be positive, got {window_size}")
    x0 = _round(center[0]) - w // 2
    y0 = _round(center[1]) - h // 2
    fh, fw = frame.shape
    if x0 >= 0 and y0 >= 0 and x0 + w <= fw and y0 + h <= fh:
        return frame[y0:y0 + h, x0:x0 + w].copy()
    rows = np.clip(np.arange(y0, y0 + h), 0, fh - 1)
    cols = np.clip(np.arange(x0, x0 + w), 0, fw - 1)
    return frame[np.ix_(rows, cols)]


def _learn(frame, center, sigma, window_size, hamming, target, epsilon):
    w, h = window_size
    window = crop_context_window(frame, center, window_size)
    prior = build_context_prior(window, sigma, (h // 2, w // 2), hamming)
    return learn_spatial_context(prior, target, epsilon)


def init(frame, box, params=None):
    """Start tracking ``box`` in ``frame``."""
    params = params or TrackerParams()
    frame = check_frame(frame)
    if box.w < 1 or box.h < 1:
        raise InvalidInputError(f"box must be at least 1x1 pixel, got {box.w}x{box.h}")
    fh, fw = frame.shape
    if box.x >= fw or box.y >= fh or box.x + box.w <= 0 or box.y + box.h <= 0:
        raise InvalidInputError(f"box {box.as_tuple()} does not intersect frame of size {fw}x{fh}")

    window_size = (
        max(1, _round(params.window_ratio * box.w)),
        max(1, _round(params.window_ratio * box.h)),
    )
    w, h = window_size
    hamming = spectral.hamming2d(h, w)
    target = build_confidence_target(h, w, (h // 2, w // 2), params.alpha, params.beta)
    sigma = (box.w + box.h) / 2.0
    center = box.center()

    hsc = _learn(frame, center, sigma, window_size, hamming, target, params.epsilon)
    model = SpatioTemporalModel(grid=hsc.grid, rho=params.rho, frames_absorbed=1)
    scale = ScaleState(s=params.initial_scale, sigma=sigma, sigma_init=sigma)
    return TrackerState(
        center=center,
        base_box=box,
        window_size=window_size,
        model=model,
        scale=scale,
        hamming=hamming,
        target=target,
        params=params,
        frame_shape=frame.shape,
    )


def update_scale(scale, peak_t, params):
    """Feed one confidence peak into the scale filter."""
    peak_t = max(float(peak_t), 0.0)
    if not scale.prev_peak:
        return replace(scale, prev_peak=peak_t)
    lo, hi = params.scale_clamp
    estimate = min(max(math.sqrt(peak_t / scale.prev_peak), lo), hi)
    history = (scale.history + (estimate,))[-params.n_scale_frames:]
    if len(history) < params.n_scale_frames:
        return replace(scale, history=history, prev_peak=peak_t)
    mean = sum(history) / len(history)
    s_next = (1.0 - params.lam) * scale.s + params.lam * mean
    return ScaleState(
        s=s_next,
        sigma=scale.s * scale.sigma,
        sigma_init=scale.sigma_init,
        history=history,
        prev_peak=peak_t,
    )


def track(state, frame):
    """Locate the target in ``frame`` and fold the frame into the model.

    Returns ``(new_state, box, confidence_map)``.
    """
    frame = check_frame(frame)
    if frame.shape != state.frame_shape:
        raise InvalidInputError(
            f"frame shape {frame.shape} differs from the initial frame {state.frame_shape}"
        )
    params = state.params
    sigma = state.scale.sigma
    lrow, lcol = state.local_center

    window = crop_context_window(frame, state.center, state.window_size)
    prior = build_context_prior(window, sigma, (lrow, lcol), state.hamming)
    conf = compute_confidence(state.model, prior)

    if not np.any(conf.grid):
        warnings.warn(
            f"confidence map is all zero at frame {state.frame_index + 1}; keeping previous center",
            LostConfidenceWarning,
            stacklevel=2,
        )
        center = state.center
    else:
        prow, pcol = conf.peak_location
        center = (state.center[0] + (pcol - lcol), state.center[1] + (prow - lrow))

    scale = update_scale(state.scale, conf.peak_value, params)

    hsc = _learn(
        frame, center, sigma, state.window_size, state.hamming, state.target, params.epsilon
    )
    model = update_stc(state.model, hsc)

    new_state = replace(
        state,
        center=center,
        model=model,
        scale=scale,
        frame_index=state.frame_index + 1,
    )
    return new_state, new_state.box(), conf
