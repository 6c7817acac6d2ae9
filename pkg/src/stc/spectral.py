"""2-D spectral transforms and window generation.

Grids are plain 2-D numpy arrays. The forward transform is unnormalized and
the inverse carries the ``1/(H*W)`` factor, so ``ifft2(fft2(g)) == g``.
Arbitrary (non power-of-two) sizes are transformed directly.
"""

import threading
import warnings
from contextlib import contextmanager

import numpy as np

from .exceptions import ImaginaryResidueWarning, InvalidInputError

RESIDUE_TOLERANCE = 1e-6

_local = threading.local()


class TransformCounter:
    """Tally of forward and inverse transforms issued on the current thread."""

    def __init__(self):
        self.forward = 0
        self.inverse = 0

    @property
    def count(self):
        return self.forward + self.inverse

    def __repr__(self):
        return f"TransformCounter(forward={self.forward}, inverse={self.inverse})"


@contextmanager
def count_transforms():
    """Count every fft2/ifft2 call made on this thread inside the block.

    >>> with count_transforms() as counter:
    ...     _ = fft2(np.ones((4, 4)))
    >>> counter.count
    1
    """
    stack = getattr(_local, "counters", None)
    if stack is None:
        stack = _local.counters = []
    counter = TransformCounter()
    stack.append(counter)
    try:
        yield counter
    finally:
        stack.remove(counter)


def _tally(attr):
    for counter in getattr(_local, "counters", ()):
        setattr(counter, attr, getattr(counter, attr) + 1)


def _check_grid(g, name):
    g = np.asarray(g)
    if g.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {g.shape}")
    if g.size == 0:
        raise InvalidInputError(f"{name} is empty (shape {g.shape})")
    return g


def fft2(g):
    """Unnormalized forward 2-D DFT of a real (or complex) grid."""
    g = _check_grid(g, "grid")
    _tally("forward")
    return np.fft.fft2(g)


def ifft2(G, return_residue=False, residue_tol=RESIDUE_TOLERANCE):
    """Normalized inverse 2-D DFT, returning the real part.

    The largest imaginary component left over is the diagnostic residue. It
    triggers an :class:`ImaginaryResidueWarning` when it exceeds
    ``residue_tol * max|real part|``; pass ``return_residue=True`` to get it
    back as a second value.
    """
    G = _check_grid(G, "spectrum")
    _tally("inverse")
    out = np.fft.ifft2(G)
    real = out.real
    residue = float(np.max(np.abs(out.imag)))
    scale = float(np.max(np.abs(real)))
    if residue > residue_tol * scale and residue > 0.0:
        warnings.warn(
            f"inverse transform left imaginary residue {residue:.3g} "
            f"(max |real| = {scale:.3g})",
            ImaginaryResidueWarning,
            stacklevel=2,
        )
    if return_residue:
        return real, residue
    return real


def hamming1d(n):
    """Symmetric Hamming window; a length-1 window is ``[1.0]``."""
    if n < 1:
        raise InvalidInputError(f"window length must be >= 1, got {n}")
    if n == 1:
        return np.ones(1)
    k = np.arange(n)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * k / (n - 1))


def hamming2d(height, width):
    """Separable 2-D Hamming window of shape ``(height, width)``."""
    return np.outer(hamming1d(int(height)), hamming1d(int(width)))
