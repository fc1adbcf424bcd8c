"""scikit-learn style wrapper: fit on a polygon and start, predict reachability of points."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .canonical import reach
from .geometry import Configuration, TolerancePolicy
from .polygon import validate


class ReachableSet(ClassifierMixin, BaseEstimator):
    """Binary classifier of points: 1 when reachable from the fitted start.

    Parameters
    ----------
    tol_len, tol_angle, tol_band : float
        Tolerances used for polygon validation and boundary snapping.
    """

    def __init__(self, tol_len: float = 1e-9, tol_angle: float = 1e-9, tol_band: float = 1e-6):
        self.tol_len = tol_len
        self.tol_angle = tol_angle
        self.tol_band = tol_band

    def fit(self, polygon, start):
        """``polygon`` is an (n, 2) array of counterclockwise vertices and
        ``start`` is ``(x, y, heading)`` or a ``Configuration``."""
        tol = TolerancePolicy(self.tol_len, self.tol_angle, self.tol_band)
        verts = check_array(polygon, ensure_min_samples=3)
        if verts.shape[1] != 2:
            raise ValueError("polygon vertices must have two coordinates")
        self.polygon_ = validate(verts, tol)
        if not isinstance(start, Configuration):
            x, y, th = (float(v) for v in start)
            start = Configuration.from_pose(x, y, th)
        self.start_ = start
        self.result_ = reach(self.polygon_, start)
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = 2
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "result_")
        X = check_array(X)
        if X.shape[1] != 2:
            raise ValueError(f"expected points with 2 coordinates, got {X.shape[1]}")
        return self.result_.contains_mask(X, self.tol_band).astype(int)

    def region(self):
        check_is_fitted(self, "result_")
        return self.result_.region
