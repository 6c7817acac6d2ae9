"""scikit-learn style wrapper around the functional tracker."""

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import tracker
from .validation import check_box, check_frame


class STCTracker(BaseEstimator):
    """Spatio-temporal context tracker with estimator-style parameters.

    ``fit(frame, box)`` initializes on the first frame; ``update(frame)``
    consumes each following frame and returns the tracked box. Hyperparameters
    round-trip through ``get_params``/``set_params`` so the tracker can be
    cloned or grid-searched like any other estimator.

    Parameters
    ----------
    alpha, beta : float
        Scale and shape of the designed confidence map.
    rho : float
        Learning rate of the spatio-temporal model, in (0, 1).
    lam : float
        Scale filter gain, in (0, 1).
    n_scale : int
        Number of per-frame scale estimates averaged before each update.
    window_ratio : float
        Context window size relative to the initial box.
    epsilon : float
        Relative regularization floor of the deconvolution.
    scale_clamp : (float, float)
        Bounds on each per-frame scale estimate.
    """

    def __init__(self, alpha=2.25, beta=1.0, rho=0.075, lam=0.25, n_scale=5,
                 window_ratio=2.0, epsilon=1e-6, scale_clamp=(0.5, 2.0)):
        self.alpha = alpha
        self.beta = beta
        self.rho = rho
        self.lam = lam
        self.n_scale = n_scale
        self.window_ratio = window_ratio
        self.epsilon = epsilon
        self.scale_clamp = scale_clamp

    def tracker_params(self):
        return tracker.TrackerParams(
            alpha=self.alpha, beta=self.beta, rho=self.rho, lam=self.lam,
            n_scale_frames=self.n_scale, window_ratio=self.window_ratio,
            epsilon=self.epsilon, scale_clamp=tuple(self.scale_clamp),
        )

    def fit(self, frame, box):
        self.state_ = tracker.init(check_frame(frame), check_box(box), self.tracker_params())
        self.confidence_ = None
        return self

    def update(self, frame):
        if not hasattr(self, "state_"):
            raise NotFittedError("call fit(frame, box) before update()")
        self.state_, box, self.confidence_ = tracker.track(self.state_, frame)
        return box

    def track_sequence(self, frames, box):
        """Run over a whole sequence; the first box is the given one."""
        frames = iter(frames)
        self.fit(next(frames), box)
        boxes = [check_box(box)]
        boxes.extend(self.update(f) for f in frames)
        return boxes

    @property
    def center_(self):
        return self.state_.center

    @property
    def scale_(self):
        return self.state_.scale.cumulative
