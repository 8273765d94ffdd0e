"""Bias correction of shrunken estimates by re-projection onto their column
spaces.

Nuclear-norm shrinkage biases all retained singular values downward. The
correction keeps only the estimated per-view column space: for each view the
data is projected onto the span of the estimate's retained left singular
vectors, which is the least-squares fit of the data under that column-space
constraint.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import Basis, svd


@dataclass
class RefitResult:
    """Per-view re-projected estimates with the bases that define them."""

    estimates: list
    ranks: list
    bases: list


def refit(views, estimates, rank_tol=1e-8, rank_floor=0.0):
    """Project each view onto the column space of its estimate.

    Parameters
    ----------
    views : list of arrays
        Observed data X_d.
    estimates : list of arrays or FitResult
        Penalized estimates whose left singular subspaces define the target
        column spaces.
    rank_tol : float
        Relative singular-value cutoff for reading each estimate's rank.
    rank_floor : float
        Absolute cutoff on top of ``rank_tol``; pass roughly the solver's
        resolution when the estimates come out of an iterative fit.

    Returns
    -------
    RefitResult
        ``estimates[d] = U_d U_d' X_d`` where U_d spans the retained left
        singular vectors; a rank-0 estimate yields a zero matrix.
    """
    if hasattr(estimates, "estimates"):
        estimates = estimates.estimates
    if len(views) != len(estimates):
        raise ValueError("views and estimates differ in length")
    out, ranks, bases = [], [], []
    for x, m in zip(views, estimates):
        if x.shape != m.shape:
            raise ValueError(f"shape mismatch: data {x.shape} vs estimate {m.shape}")
        if not np.any(m):
            out.append(np.zeros_like(x))
            ranks.append(0)
            bases.append(Basis.empty(x.shape[0]))
            continue
        f = svd(m)
        r = int(np.sum(f.s > max(rank_tol * f.s[0], rank_floor)))
        if r == 0:
            out.append(np.zeros_like(x))
            ranks.append(0)
            bases.append(Basis.empty(x.shape[0]))
            continue
        u = f.u[:, :r]
        out.append(u @ (u.T @ x))
        ranks.append(r)
        bases.append(Basis(u.copy()))
    return RefitResult(estimates=out, ranks=ranks, bases=bases)
