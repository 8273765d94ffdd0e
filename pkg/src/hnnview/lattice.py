"""The subset lattice of views and penalties defined over it.

Subsets of views are ascending tuples of 1-based indices, e.g. ``(1, 3)``.
Level ``l`` of the lattice for ``d`` views holds all subsets of size
``d - l + 1``: level 1 is the full set, level ``d`` the singletons.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .linalg import nuclear_norm, numerical_rank
from .validation import MAX_VIEWS

Subset = tuple


def normalize_subset(subset):
    """Canonical ascending tuple form of a view subset."""
    t = tuple(sorted(int(i) for i in subset))
    if len(t) == 0:
        raise ValueError("view subsets must be nonempty")
    if len(set(t)) != len(t):
        raise ValueError(f"duplicate view index in subset {subset}")
    if t[0] < 1:
        raise ValueError(f"view indices are 1-based, got {subset}")
    return t


@dataclass(frozen=True)
class SubsetLattice:
    """All nonempty subsets of ``{1..d}`` grouped by hierarchical level."""

    d: int
    levels: tuple = field(repr=False)

    @property
    def subsets(self):
        """All subsets in level order (level 1 first), lexicographic within
        each level."""
        return [s for level in self.levels for s in level]

    def level_of(self, subset):
        return self.d - len(subset) + 1

    def __contains__(self, subset):
        s = normalize_subset(subset)
        return len(s) <= self.d and s[-1] <= self.d


def build_lattice(d):
    """Construct the subset lattice for ``d`` views.

    ``d`` is capped at 6: the lattice has ``2^d - 1`` entries and each one
    carries a penalty term and a dual matrix in the solver.
    """
    if not 2 <= d <= MAX_VIEWS:
        raise ValueError(f"need 2 <= d <= {MAX_VIEWS} views, got {d}")
    levels = []
    for level in range(1, d + 1):
        k = d - level + 1
        levels.append(tuple(sorted(combinations(range(1, d + 1), k))))
    return SubsetLattice(d=d, levels=tuple(levels))


@dataclass(frozen=True)
class PenaltySpec:
    """Per-subset nuclear-norm weights over a subset lattice.

    Every subset of the lattice has an entry; zero means unpenalized.
    """

    lattice: SubsetLattice
    values: dict = field(repr=False)

    def __post_init__(self):
        missing = [s for s in self.lattice.subsets if s not in self.values]
        if missing:
            raise ValueError(f"penalty spec is missing subsets: {missing}")
        for s, v in self.values.items():
            if v < 0:
                raise ValueError(f"negative penalty {v} for subset {s}")

    def __getitem__(self, subset):
        return self.values[normalize_subset(subset)]

    @property
    def active_subsets(self):
        """Penalized subsets, singletons first (level d down to level 1),
        lexicographic within each level. This is the solver's sweep order."""
        return [
            s
            for level in reversed(self.lattice.levels)
            for s in level
            if self.values[s] > 0
        ]

    @staticmethod
    def from_dict(d, values):
        """Build a spec for ``d`` views; absent subsets get zero."""
        lattice = build_lattice(d)
        vals = {s: 0.0 for s in lattice.subsets}
        for subset, v in values.items():
            s = normalize_subset(subset)
            if s not in vals:
                raise ValueError(f"subset {s} is not in the lattice for d={d}")
            vals[s] = float(v)
        return PenaltySpec(lattice=lattice, values=vals)

    @staticmethod
    def zeros(d):
        return PenaltySpec.from_dict(d, {})

    @staticmethod
    def constant(d, value):
        lattice = build_lattice(d)
        return PenaltySpec(
            lattice=lattice, values={s: float(value) for s in lattice.subsets}
        )


def concat_views(views):
    """Column-wise concatenation of all views, in view order."""
    return np.concatenate(views, axis=1)


def concat_submatrix(views, subset):
    """Column-wise concatenation of the views listed in ``subset``
    (ascending view order)."""
    s = normalize_subset(subset)
    if s[-1] > len(views):
        raise ValueError(f"subset {s} refers to view {s[-1]} but only "
                         f"{len(views)} views are present")
    return np.concatenate([views[i - 1] for i in s], axis=1)


def view_slices(col_counts):
    """Global column slice of each view inside the concatenated matrix."""
    slices, start = [], 0
    for p in col_counts:
        slices.append(slice(start, start + p))
        start += p
    return slices


def split_concat(m, col_counts):
    """Inverse of :func:`concat_views`."""
    return [m[:, sl] for sl in view_slices(col_counts)]


def hnn_value(views, spec):
    """Weighted sum of nuclear norms over all penalized subsets."""
    total = 0.0
    for s in spec.lattice.subsets:
        lam = spec.values[s]
        if lam > 0:
            total += lam * nuclear_norm(concat_submatrix(views, s))
    return total


def rank_profile(views, lattice=None, rank_tol=1e-8, floor=0.0):
    """Numerical rank of every subset concatenation.

    Returns a dict mapping subset -> rank. ``floor`` is an absolute
    singular-value cutoff used on top of the relative ``rank_tol`` (needed
    when the views come out of an iterative solver).
    """
    if lattice is None:
        lattice = build_lattice(len(views))
    return {
        s: numerical_rank(concat_submatrix(views, s), rank_tol=rank_tol, floor=floor)
        for s in lattice.subsets
    }
