"""Input validation helpers for multi-view data."""

import numpy as np
from sklearn.utils import check_array

MAX_VIEWS = 6


def check_views(Xs, *, min_views=2, copy=False):
    """Validate a multi-view dataset.

    Parameters
    ----------
    Xs : list of array-like, each of shape (n_samples, p_d)
        The views. All must share the same number of rows and contain
        only finite values.
    min_views : int
        Minimum number of views required.
    copy : bool
        Force a copy of each view.

    Returns
    -------
    views : list of ndarray
        Validated float64 arrays.
    """
    if isinstance(Xs, np.ndarray) and Xs.ndim == 2:
        raise ValueError(
            "expected a list of view matrices, got a single 2-d array; "
            "wrap it in a list"
        )
    views = [
        check_array(X, dtype=np.float64, copy=copy, ensure_all_finite=True)
        for X in Xs
    ]
    if len(views) < min_views:
        raise ValueError(f"need at least {min_views} views, got {len(views)}")
    if len(views) > MAX_VIEWS:
        raise ValueError(
            f"got {len(views)} views; the subset lattice grows as 2^D and is "
            f"capped at D={MAX_VIEWS}"
        )
    n = views[0].shape[0]
    for i, v in enumerate(views):
        if v.shape[0] != n:
            raise ValueError(
                f"view {i + 1} has {v.shape[0]} rows, expected {n}: all views "
                "must be measured on the same samples"
            )
    return views


def check_matrix(a, name="a"):
    """Validate a single dense matrix (finite float64 2-d array)."""
    return check_array(a, dtype=np.float64, ensure_all_finite=True, input_name=name)
