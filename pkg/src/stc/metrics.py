"""Center location error, overlap score and success rate."""

import csv
import io
import math
from dataclasses import dataclass

from .exceptions import InvalidInputError
from .validation import check_same_length

SUMMARY_FIELDS = ("name", "frames", "mean_cle", "success_rate", "fps")


@dataclass(frozen=True)
class EvalSummary:
    sequence_name: str
    mean_cle: float
    success_rate: float
    frames: int
    fps: float

    def as_row(self):
        return (self.sequence_name, self.frames, f"{self.mean_cle:.4f}",
                f"{self.success_rate:.4f}", f"{self.fps:.2f}")


def center_error(result, truth):
    (rx, ry), (tx, ty) = result.center(), truth.center()
    return math.hypot(rx - tx, ry - ty)


def overlap_score(result, truth):
    """Intersection over union of two axis-aligned rectangles."""
    if result == truth:
        # (x + w) - x need not round back to w
        return 1.0
    iw = min(result.x + result.w, truth.x + truth.w) - max(result.x, truth.x)
    ih = min(result.y + result.h, truth.y + truth.h) - max(result.y, truth.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = result.w * result.h + truth.w * truth.h - inter
    return min(inter / union, 1.0)


def success_rate(results, truths, threshold=0.5):
    """Fraction of frames whose overlap score is strictly above ``threshold``."""
    check_same_length(results, truths, "results and ground truth")
    hits = sum(overlap_score(r, t) > threshold for r, t in zip(results, truths))
    return hits / len(results)


def summarize(name, results, truths, elapsed_seconds):
    check_same_length(results, truths, "results and ground truth")
    if not elapsed_seconds > 0:
        raise InvalidInputError(f"elapsed time must be positive, got {elapsed_seconds}")
    errors = [center_error(r, t) for r, t in zip(results, truths)]
    return EvalSummary(
        sequence_name=name,
        mean_cle=sum(errors) / len(errors),
        success_rate=success_rate(results, truths),
        frames=len(results),
        fps=len(results) / elapsed_seconds,
    )


def summary_csv(summaries):
    """Render summaries as CSV text with a header line."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_FIELDS)
    for s in summaries:
        writer.writerow(s.as_row())
    return buf.getvalue()
