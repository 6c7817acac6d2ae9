"""Spatial / spatio-temporal context learning and confidence maps.

All grids live on the context window and are plain 2-D float arrays.
Convolutions are circular (FFT-induced); nothing is zero-padded or shifted.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .exceptions import (
    DegeneratePriorWarning,
    InvalidInputError,
    SingularDeconvolutionError,
)


@dataclass(frozen=True)
class ContextPrior:
    """Mean-subtracted, windowed intensity times a Gaussian focus of attention."""

    grid: np.ndarray
    sigma: float
    center: tuple


@dataclass(frozen=True)
class ConfidenceTarget:
    grid: np.ndarray
    alpha: float
    beta: float
    center: tuple


@dataclass(frozen=True)
class SpatialContextModel:
    grid: np.ndarray
    degenerate: bool = False


@dataclass(frozen=True)
class SpatioTemporalModel:
    grid: np.ndarray
    rho: float
    frames_absorbed: int = 0

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise InvalidInputError(f"rho must lie in (0, 1), got {self.rho}")


@dataclass(frozen=True)
class ConfidenceMap:
    grid: np.ndarray
    peak_value: float = field(init=False)
    peak_location: tuple = field(init=False)

    def __post_init__(self):
        # argmax returns the first row-major occurrence on ties
        idx = int(np.argmax(self.grid))
        row, col = divmod(idx, self.grid.shape[1])
        object.__setattr__(self, "peak_value", float(self.grid[row, col]))
        object.__setattr__(self, "peak_location", (row, col))


def _check_center(center, shape):
    row, col = center
    if not (0 <= row < shape[0] and 0 <= col < shape[1]):
        raise InvalidInputError(f"center {center} lies outside grid of shape {shape}")
    return int(row), int(col)


def _check_same_shape(a, b, what):
    if a.shape != b.shape:
        raise InvalidInputError(f"{what}: shape mismatch {a.shape} vs {b.shape}")


def squared_distance(shape, center):
    """Squared Euclidean pixel distance of every grid cell to ``center``."""
    rows = np.arange(shape[0]) - center[0]
    cols = np.arange(shape[1]) - center[1]
    return rows[:, None] ** 2 + cols[None, :] ** 2


def build_context_prior(window, sigma, center, hamming):
    """Weighted context image for a window cropped around the target.

    ``center`` is the (row, col) of the target inside the window. The
    Gaussian weight is peak-normalized (its value at ``center`` is 1).
    """
    window = np.asarray(window, dtype=float)
    hamming = np.asarray(hamming, dtype=float)
    _check_same_shape(window, hamming, "window vs hamming")
    if not sigma > 0:
        raise InvalidInputError(f"sigma must be positive, got {sigma}")
    center = _check_center(center, window.shape)
    weight = np.exp(-squared_distance(window.shape, center) / sigma**2)
    grid = (window - window.mean()) * hamming * weight
    return ContextPrior(grid=grid, sigma=float(sigma), center=center)


def build_confidence_target(height, width, center, alpha, beta):
    """Designed confidence map ``exp(-(|x - center| / alpha) ** beta)``."""
    if not (alpha > 0 and beta > 0):
        raise InvalidInputError(f"alpha and beta must be positive, got {alpha}, {beta}")
    center = _check_center(center, (height, width))
    dist = np.sqrt(squared_distance((height, width), center))
    grid = np.exp(-((dist / alpha) ** beta))
    return ConfidenceTarget(grid=grid, alpha=float(alpha), beta=float(beta), center=center)


def learn_spatial_context(prior, target, epsilon=1e-6):
    """Deconvolve the confidence target by the context prior.

    Solves ``target = h (*) prior`` for ``h`` in the frequency domain using
    the conjugate form with a real floor ``epsilon * mean(|F(prior)|^2)`` on
    the denominator. With ``epsilon == 0`` this is plain spectral division.
    """
    _check_same_shape(prior.grid, target.grid, "prior vs target")
    if epsilon < 0:
        raise InvalidInputError(f"epsilon must be non-negative, got {epsilon}")
    T = spectral.fft2(target.grid)
    P = spectral.fft2(prior.grid)
    power = P.real**2 + P.imag**2
    floor = epsilon * power.mean()
    denom = power + floor
    if floor == 0.0:
        if epsilon == 0 and not np.all(denom > 0):
            if not np.any(denom > 0):
                raise SingularDeconvolutionError("prior spectrum is identically zero")
            raise SingularDeconvolutionError(
                f"prior spectrum vanishes at {int(np.sum(denom == 0))} bins"
            )
        if epsilon > 0:
            # all-zero prior: nothing to learn from
            warnings.warn(
                "context prior is identically zero; learned model is zero",
                DegeneratePriorWarning,
                stacklevel=2,
            )
            grid = spectral.ifft2(np.zeros_like(T))
            return SpatialContextModel(grid=grid, degenerate=True)
    grid = spectral.ifft2(T * np.conj(P) / denom)
    return SpatialContextModel(grid=grid)


def update_stc(model, hsc):
    """Low-pass temporal blend ``(1 - rho) * H + rho * h``."""
    _check_same_shape(model.grid, hsc.grid, "model vs spatial context")
    rho = model.rho
    grid = (1.0 - rho) * model.grid + rho * hsc.grid
    return SpatioTemporalModel(grid=grid, rho=rho, frames_absorbed=model.frames_absorbed + 1)


def compute_confidence(model, prior):
    """Confidence map: circular convolution of the model with the prior."""
    _check_same_shape(model.grid, prior.grid, "model vs prior")
    spec = spectral.fft2(model.grid) * spectral.fft2(prior.grid)
    return ConfidenceMap(grid=spectral.ifft2(spec))


def stc_filter_gain(omega, rho):
    """Magnitude response ``|rho / (exp(j*omega) - (1 - rho))|`` of the blend."""
    if not 0.0 < rho < 1.0:
        raise InvalidInputError(f"rho must lie in (0, 1), got {rho}")
    omega = np.asarray(omega, dtype=float)
    # (cos - 1) + rho keeps omega == 0 exact: the denominator is rho itself
    denom = (np.cos(omega) - 1.0 + rho) + 1j * np.sin(omega)
    gain = np.abs(rho / denom)
    return float(gain) if gain.ndim == 0 else gain
