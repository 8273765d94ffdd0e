"""Column centering and Frobenius scaling of multi-view data."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .validation import check_views


class ViewScaler(BaseEstimator, TransformerMixin):
    """Column-center each view and scale it to unit Frobenius norm.

    The learned per-view column means and scale factors are recorded so that
    estimates computed on the transformed data can be mapped back to the
    original units exactly.

    Parameters
    ----------
    with_centering : bool
        Subtract per-view column means.
    with_scaling : bool
        Divide each (centered) view by its Frobenius norm.

    Attributes
    ----------
    means_ : list of ndarray
        Per-view column means (zero vectors when centering is off).
    scales_ : list of float
        Per-view Frobenius norms of the centered views (1.0 when scaling is
        off).
    """

    def __init__(self, with_centering=True, with_scaling=True):
        self.with_centering = with_centering
        self.with_scaling = with_scaling

    def fit(self, Xs, y=None):
        views = check_views(Xs)
        if views[0].shape[0] < 2 and self.with_centering:
            raise ValueError("centering needs at least 2 samples")
        self.means_ = []
        self.scales_ = []
        for i, v in enumerate(views):
            mu = v.mean(axis=0) if self.with_centering else np.zeros(v.shape[1])
            centered = v - mu
            if self.with_scaling:
                scale = float(np.linalg.norm(centered))
                if scale == 0.0:
                    raise ValueError(
                        f"view {i + 1} is zero after centering; it carries no "
                        "signal to scale"
                    )
            else:
                scale = 1.0
            self.means_.append(mu)
            self.scales_.append(scale)
        return self

    def transform(self, Xs):
        self._check_fitted()
        views = check_views(Xs)
        return [
            (v - mu) / sc for v, mu, sc in zip(views, self.means_, self.scales_)
        ]

    def inverse_transform(self, Xs):
        """Map transformed views (or estimates in transformed units) back."""
        self._check_fitted()
        views = check_views(Xs)
        return [
            v * sc + mu for v, mu, sc in zip(views, self.means_, self.scales_)
        ]

    def _check_fitted(self):
        if not hasattr(self, "means_"):
            raise NotFittedError("ViewScaler is not fitted yet")


def preprocess(Xs):
    """Center and scale views; returns ``(transformed_views, fitted_scaler)``."""
    scaler = ViewScaler()
    out = scaler.fit(Xs).transform(Xs)
    return out, scaler
