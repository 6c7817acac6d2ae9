"""Input validation helpers shared by the tracker, estimator and CLI."""

import numpy as np

from .exceptions import InvalidInputError


def check_frame(frame):
    """Return ``frame`` as a finite 2-D float array, or raise."""
    arr = np.asarray(frame, dtype=float)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim != 2:
        raise InvalidInputError(
            f"expected a single-channel 2-D frame, got shape {arr.shape}"
        )
    if arr.size == 0:
        raise InvalidInputError("frame is empty")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("frame contains non-finite values")
    return arr


def check_box(box):
    """Coerce a 4-sequence or BoundingBox into a BoundingBox."""
    from .tracker import BoundingBox

    if isinstance(box, BoundingBox):
        return box
    try:
        x, y, w, h = (float(v) for v in box)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"expected a box (x, y, w, h), got {box!r}") from exc
    return BoundingBox(x, y, w, h)


def check_same_length(a, b, what="sequences"):
    if len(a) != len(b):
        raise InvalidInputError(f"{what} differ in length: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise InvalidInputError(f"{what} are empty")
