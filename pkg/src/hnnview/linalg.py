"""Dense linear-algebra kernels: SVD shrinkage, bases, projections, angles.

All functions are pure and operate on float64 ndarrays. Tolerances follow two
conventions used throughout the package:

* ``rank_tol`` -- relative cutoff on singular values (relative to the largest
  singular value of the matrix whose rank is being read).
* an optional absolute floor, used where the matrix is itself the output of an
  iterative solver or a projection, so that round-off junk below the floor is
  not mistaken for signal.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from .validation import check_matrix

DEFAULT_RANK_TOL = 1e-8
DEFAULT_ANGLE_TOL = 1e-6


class SvdError(RuntimeError):
    """The underlying SVD factorization failed to converge."""


@dataclass(frozen=True)
class Svd:
    """Thin SVD ``a = u @ diag(s) @ vt`` with ``s`` descending."""

    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray


@dataclass(frozen=True)
class Basis:
    """Orthonormal basis of a column space; ``dim == 0`` encodes {0}."""

    matrix: np.ndarray

    @property
    def dim(self):
        return self.matrix.shape[1]

    @property
    def rows(self):
        return self.matrix.shape[0]

    @staticmethod
    def empty(rows):
        return Basis(np.zeros((rows, 0)))


def svd(a):
    """Thin SVD of a finite matrix.

    Raises
    ------
    SvdError
        If the LAPACK iteration does not converge (rather than returning
        garbage factors).
    """
    a = check_matrix(a)
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdError(f"SVD did not converge for shape {a.shape}") from exc
    return Svd(u=u, s=s, vt=vt)


def soft_threshold_svd(x, cutoff):
    """Shrink the singular values of ``x`` by ``cutoff``, flooring at zero.

    This is the proximal operator of ``cutoff * nuclear_norm`` and the
    closed-form minimizer of ``0.5 * ||x - m||_F^2 + cutoff * ||m||_*``.

    Parameters
    ----------
    x : array of shape (n, p)
    cutoff : float
        Nonnegative shrinkage amount.

    Returns
    -------
    ndarray of shape (n, p)
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be nonnegative, got {cutoff}")
    f = svd(x)
    shrunk = np.maximum(f.s - cutoff, 0.0)
    return (f.u * shrunk) @ f.vt


def nuclear_norm(a):
    """Sum of singular values."""
    return float(np.linalg.svd(a, compute_uv=False).sum()) if a.size else 0.0


def numerical_rank(a, rank_tol=DEFAULT_RANK_TOL, floor=0.0):
    """Count singular values above ``max(rank_tol * s_max, floor)``."""
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] <= 0.0:
        return 0
    return int(np.sum(s > max(rank_tol * s[0], floor)))


def column_basis(a, rank_tol=DEFAULT_RANK_TOL, floor=0.0):
    """Orthonormal basis for the column space of ``a``.

    The numerical rank is the number of singular values exceeding
    ``max(rank_tol * s_max, floor)``. The zero matrix yields a dim-0 basis.

    The absolute ``floor`` matters when ``a`` is the residue of a projection:
    a numerically-zero matrix has round-off singular values that would all
    pass a purely relative cutoff.
    """
    a = check_matrix(a)
    if a.size == 0 or not np.any(a):
        return Basis.empty(a.shape[0])
    f = svd(a)
    r = int(np.sum(f.s > max(rank_tol * f.s[0], floor)))
    return Basis(f.u[:, :r].copy())


def project(basis, a, complement=False):
    """Project the columns of ``a`` onto a subspace (or its complement).

    Parameters
    ----------
    basis : Basis
        Orthonormal basis of the subspace, sharing ``a``'s row count.
    a : array of shape (n, p)
    complement : bool
        If True, return ``a - P a`` instead of ``P a``.
    """
    a = np.asarray(a, dtype=np.float64)
    if basis.rows != a.shape[0]:
        raise ValueError(
            f"basis has {basis.rows} rows but the matrix has {a.shape[0]}"
        )
    if basis.dim == 0:
        return a.copy() if complement else np.zeros_like(a)
    proj = basis.matrix @ (basis.matrix.T @ a)
    return a - proj if complement else proj


def residual_basis(basis, a, rank_tol=DEFAULT_RANK_TOL):
    """Basis of the column space of ``a`` after removing its ``basis`` part.

    Rank is read relative to the scale of ``a`` itself (not of the projected
    residue), so a residue that is numerically zero yields dim 0.
    """
    a = np.asarray(a, dtype=np.float64)
    scale = np.linalg.svd(a, compute_uv=False)[0] if np.any(a) else 0.0
    if scale == 0.0:
        return Basis.empty(a.shape[0])
    res = project(basis, a, complement=True)
    return column_basis(res, rank_tol=1.0, floor=rank_tol * scale)


def principal_angle_cosines(a, b):
    """Cosines of the principal angles between two nonzero subspaces.

    Parameters
    ----------
    a, b : Basis
        Orthonormal bases with matching row counts and positive dimension.

    Returns
    -------
    ndarray of length min(dim a, dim b), descending, clamped into [0, 1].
    """
    if a.dim == 0 or b.dim == 0:
        raise ValueError("principal angles require nonzero-dimensional subspaces")
    if a.rows != b.rows:
        raise ValueError("subspaces live in different ambient dimensions")
    c = np.linalg.svd(a.matrix.T @ b.matrix, compute_uv=False)
    return np.clip(c, 0.0, 1.0)


def subspace_intersection(a, b, angle_tol=DEFAULT_ANGLE_TOL):
    """Numerical intersection of two column spaces.

    Principal directions whose principal-angle cosine exceeds
    ``1 - angle_tol`` are kept; a dim-0 basis is returned when the spaces are
    (numerically) disjoint.
    """
    if a.rows != b.rows:
        raise ValueError("subspaces live in different ambient dimensions")
    if a.dim == 0 or b.dim == 0:
        return Basis.empty(a.rows)
    w, c, _ = np.linalg.svd(a.matrix.T @ b.matrix)
    keep = c > 1.0 - angle_tol
    if not keep.any():
        return Basis.empty(a.rows)
    directions = a.matrix @ w[:, : int(keep.sum())]
    # re-orthonormalize: the kept directions are orthonormal only up to
    # O(angle_tol)
    q, _ = np.linalg.qr(directions)
    return Basis(q)


def pseudo_inverse(a, rank_tol=DEFAULT_RANK_TOL):
    """Moore-Penrose pseudoinverse with singular values <= rank_tol * s_max
    treated as zero."""
    a = check_matrix(a)
    if not np.any(a):
        return np.zeros((a.shape[1], a.shape[0]))
    f = svd(a)
    keep = f.s > rank_tol * f.s[0]
    inv = np.zeros_like(f.s)
    inv[keep] = 1.0 / f.s[keep]
    return (f.vt.T * inv) @ f.u.T


@lru_cache(maxsize=None)
def marchenko_pastur_median(aspect):
    """Median of the Marchenko-Pastur law with aspect ratio in (0, 1].

    Computed by numerical integration of the density and bisection on the
    CDF; accurate to ~1e-10.
    """
    if not 0.0 < aspect <= 1.0:
        raise ValueError(f"aspect ratio must be in (0, 1], got {aspect}")
    lo = (1.0 - np.sqrt(aspect)) ** 2
    hi = (1.0 + np.sqrt(aspect)) ** 2

    def dens(x):
        return np.sqrt(max((hi - x) * (x - lo), 0.0)) / (2.0 * np.pi * aspect * x)

    total, _ = integrate.quad(dens, lo, hi, limit=200)

    def cdf_minus_half(t):
        val, _ = integrate.quad(dens, lo, t, limit=200)
        return val / total - 0.5

    return float(optimize.brentq(cdf_minus_half, lo + 1e-12, hi - 1e-12, xtol=1e-12))


def estimate_noise_mad(x):
    """Noise standard deviation from the median singular value.

    The median singular value of an n-by-p pure-noise matrix concentrates at
    ``sd * sqrt(max(n, p) * m)`` where ``m`` is the Marchenko-Pastur median at
    aspect ratio min(n,p)/max(n,p); a low-rank signal moves only the leading
    singular values, leaving the median nearly untouched.
    """
    x = check_matrix(x)
    n, p = x.shape
    if min(n, p) < 2:
        raise ValueError(f"need at least a 2x2 matrix, got {x.shape}")
    s = np.linalg.svd(x, compute_uv=False)
    med = marchenko_pastur_median(min(n, p) / max(n, p))
    return float(np.median(s) / np.sqrt(max(n, p) * med))
