"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from pairdom.empirical import PairedSample
from pairdom.oracle import DiscreteBivariate, survival_of_difference

# The six-atom discrete fixture: equal weight on each point, built so that
# P(X > Y) = P(Y > X) = 0.5, the weak joint dominance holds, and the
# marginal survival functions cross (marginals incomparable).
SIX_ATOM_POINTS = [(1, 3), (2, 5), (3, 7), (3, 2), (5, 4), (9, 6)]


@pytest.fixture
def six_atom_law() -> DiscreteBivariate:
    return DiscreteBivariate.uniform(SIX_ATOM_POINTS)


def random_discrete_bivariate(rng: np.random.Generator, max_atoms: int = 8) -> DiscreteBivariate:
    """Small random law with half-integer coordinates (to provoke ties)
    and rational probabilities."""
    m = int(rng.integers(1, max_atoms + 1))
    x = rng.integers(-3, 4, m) + rng.choice([0.0, 0.5], m)
    y = rng.integers(-3, 4, m) + rng.choice([0.0, 0.5], m)
    w = rng.integers(1, 6, m).astype(float)
    return DiscreteBivariate(x.astype(float), y, w / w.sum())


def random_ordered_discrete_bivariate(rng: np.random.Generator, max_atoms: int = 8) -> DiscreteBivariate:
    """Random law guaranteed to satisfy the weak joint order: every atom
    has y >= x, so X - Y is nonpositive with probability one."""
    m = int(rng.integers(1, max_atoms + 1))
    x = rng.integers(-3, 4, m).astype(float)
    gap = rng.integers(0, 4, m).astype(float)
    w = rng.integers(1, 6, m).astype(float)
    return DiscreteBivariate(x, x + gap, w / w.sum())


def stwj_holds_dense_scan(d: DiscreteBivariate, fill: int = 4001) -> bool:
    """Independent check of the defining inequality on a dense t-grid.

    The grid is a uniform fill of the padded support range, augmented with
    every support point and the midpoints between consecutive points, so
    that each constancy interval of the two step functions is visited.
    """
    diffs = np.concatenate([d.x - d.y, d.y - d.x])
    lo, hi = diffs.min() - 1.0, diffs.max() + 1.0
    support = np.unique(diffs)
    mids = (support[:-1] + support[1:]) / 2.0 if len(support) > 1 else np.array([])
    grid = np.unique(np.concatenate([np.linspace(lo, hi, fill), support, mids]))
    for t in grid:
        if survival_of_difference(d, "x-y", float(t)) > survival_of_difference(
            d, "y-x", float(t)
        ) + 1e-12:
            return False
    return True


def random_paired_sample(rng: np.random.Generator, n_max: int = 40) -> PairedSample:
    n = int(rng.integers(2, n_max + 1))
    x = rng.normal(0.0, 1.0, n)
    y = x * rng.uniform(0.2, 1.0) + rng.normal(0.2, 1.0, n)
    return PairedSample(x, y)
