"""Penalized least-squares solver for subset-structured nuclear norms.

The problem solved is

    minimize over M_1..M_D   0.5 * sum_d ||X_d - M_d||_F^2
                             + sum_S lambda_S * || [M_d : d in S] ||_*

where S ranges over the subset lattice of views. Each penalty term gets a
dual matrix; one iteration sweeps the penalized subsets (singletons first,
then up the lattice to the full set), taking for each a forward-backward step
on its dual block against the current primal iterate and folding the dual
change back into the primal immediately. Updating the primal inside the sweep
is what keeps every relaxation parameter in (0, 2) admissible; applying all
dual steps against the sweep-start primal is only stable when the relaxation
parameter is below 2 divided by the largest number of penalized subsets any
view belongs to.
"""

from dataclasses import dataclass, field

import numpy as np

from .lattice import (
    PenaltySpec,
    concat_views,
    hnn_value,
    rank_profile,
    split_concat,
    view_slices,
)
from .linalg import soft_threshold_svd
from .validation import check_views


class DivergenceError(RuntimeError):
    """Non-finite values appeared during the iteration."""


@dataclass(frozen=True)
class SolverConfig:
    """Iteration controls.

    Parameters
    ----------
    gamma : float
        Relaxation parameter, in (0, 2).
    epsilon : float
        Stopping tolerance on the Frobenius norm of the primal change per
        sweep. The default assumes unit-scale (preprocessed) inputs.
    max_iters : int
        Sweep budget; hitting it returns the current iterate flagged as not
        converged instead of raising.
    record_objective : bool
        Record the penalized objective after every sweep.
    rank_tol : float
        Relative singular-value cutoff for the rank profile of the result.
    rank_floor : float or None
        Absolute singular-value cutoff for the rank profile. Defaults to
        ``100 * epsilon``: singular values the iteration cannot resolve are
        not counted as rank.
    """

    gamma: float = 1.0
    epsilon: float = 1e-6
    max_iters: int = 5000
    record_objective: bool = False
    rank_tol: float = 1e-8
    rank_floor: float = None

    def __post_init__(self):
        if not 0.0 < self.gamma < 2.0:
            raise ValueError(f"gamma must be in (0, 2), got {self.gamma}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")

    @property
    def effective_rank_floor(self):
        return 100.0 * self.epsilon if self.rank_floor is None else self.rank_floor


@dataclass
class SolverState:
    """Primal iterate plus one dual matrix per penalized subset."""

    m: np.ndarray
    duals: dict
    iters: int = 0
    primal_change: float = np.inf
    objective_trace: list = field(default_factory=list)


@dataclass
class FitResult:
    """Solution of one penalized fit."""

    estimates: list
    converged: bool
    iters: int
    final_objective: float
    rank_profile: dict
    state: SolverState


def objective(views, estimates, spec):
    """Penalized objective: 0.5 * sum of squared residuals + weighted
    nuclear norms."""
    resid = 0.5 * sum(
        float(np.sum((x - m) ** 2)) for x, m in zip(views, estimates)
    )
    return resid + hnn_value(estimates, spec)


def duality_gap(views, result, spec):
    """Diagnostic duality gap of a fit (nonnegative up to round-off at the
    solution). Not used as a stopping criterion."""
    w = np.zeros_like(result.state.m)
    ps = [v.shape[1] for v in views]
    slices = view_slices(ps)
    for s, dual in result.state.duals.items():
        start = 0
        for d in s:
            width = ps[d - 1]
            w[:, slices[d - 1]] += dual[:, start : start + width]
            start += width
    x = concat_views(views)
    dual_value = float(np.sum(w * x)) - 0.5 * float(np.sum(w * w))
    return objective(views, result.estimates, spec) - dual_value


def fit_hnn(views, spec, config=None, state=None):
    """Solve the subset-penalized least-squares problem.

    Parameters
    ----------
    views : list of arrays sharing the row count
        Observed data X_d.
    spec : PenaltySpec
        Per-subset penalties; subsets with zero weight are skipped (their
        proximal step is the identity).
    config : SolverConfig, optional
    state : SolverState, optional
        Warm start (primal and duals), e.g. from a fit at a nearby penalty.

    Returns
    -------
    FitResult
        Per-view estimates, convergence flag, iteration count, final
        objective, subset rank profile, and the final solver state.

    Raises
    ------
    DivergenceError
        If non-finite values appear mid-iteration (names the sweep).
    """
    views = check_views(views)
    if config is None:
        config = SolverConfig()
    if not isinstance(spec, PenaltySpec):
        spec = PenaltySpec.from_dict(len(views), spec)
    if spec.lattice.d != len(views):
        raise ValueError(
            f"penalty spec is for {spec.lattice.d} views, data has {len(views)}"
        )

    ps = [v.shape[1] for v in views]
    slices = view_slices(ps)
    n = views[0].shape[0]
    active = spec.active_subsets

    if state is None:
        m = concat_views(views)
        duals = {}
    else:
        m = state.m.copy()
        if m.shape != (n, sum(ps)):
            raise ValueError("warm-start state does not match the data shape")
        duals = {s: d.copy() for s, d in state.duals.items() if s in set(active)}
    for s in active:
        if s not in duals:
            duals[s] = np.zeros((n, sum(ps[d - 1] for d in s)))

    gamma = config.gamma
    trace = []
    converged = False
    change = 0.0
    it = 0
    for it in range(1, config.max_iters + 1):
        m_prev = m.copy()
        for s in active:
            ms = np.concatenate([m[:, slices[d - 1]] for d in s], axis=1)
            t = duals[s] + gamma * ms
            d_new = t - soft_threshold_svd(t, spec.values[s])
            d_delta = d_new - duals[s]
            duals[s] = d_new
            start = 0
            for d in s:
                width = ps[d - 1]
                m[:, slices[d - 1]] -= d_delta[:, start : start + width]
                start += width
        if not np.all(np.isfinite(m)):
            raise DivergenceError(f"non-finite primal iterate at sweep {it}")
        change = float(np.linalg.norm(m - m_prev))
        if config.record_objective:
            trace.append(objective(views, split_concat(m, ps), spec))
        if change < config.epsilon:
            converged = True
            break

    estimates = split_concat(m, ps)
    final_state = SolverState(
        m=m, duals=duals, iters=it, primal_change=change, objective_trace=trace
    )
    return FitResult(
        estimates=estimates,
        converged=converged,
        iters=it,
        final_objective=objective(views, estimates, spec),
        rank_profile=rank_profile(
            estimates,
            spec.lattice,
            rank_tol=config.rank_tol,
            floor=config.effective_rank_floor,
        ),
        state=final_state,
    )
