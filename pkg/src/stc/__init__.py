"""Fast visual tracking with spatio-temporal context learning."""

__version__ = "0.1.0"

from .context import (
    ConfidenceMap,
    ConfidenceTarget,
    ContextPrior,
    SpatialContextModel,
    SpatioTemporalModel,
    build_confidence_target,
    build_context_prior,
    compute_confidence,
    learn_spatial_context,
    stc_filter_gain,
    update_stc,
)
from .estimator import STCTracker
from .metrics import EvalSummary, center_error, overlap_score, success_rate, summarize
from .tracker import (
    BoundingBox,
    ScaleState,
    TrackerParams,
    TrackerState,
    crop_context_window,
    init,
    track,
    update_scale,
)

__all__ = [
    "BoundingBox", "ConfidenceMap", "ConfidenceTarget", "ContextPrior", "EvalSummary",
    "STCTracker", "ScaleState", "SpatialContextModel", "SpatioTemporalModel",
    "TrackerParams", "TrackerState", "build_confidence_target", "build_context_prior",
    "center_error", "compute_confidence", "crop_context_window", "init",
    "learn_spatial_context", "overlap_score", "stc_filter_gain", "success_rate",
    "summarize", "track", "update_scale", "update_stc",
]
