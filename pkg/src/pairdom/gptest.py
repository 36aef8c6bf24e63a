"""Asymptotic significance machinery for the paired dominance test.

Under the null hypothesis the scaled empirical survival gap is bounded in
distribution by a zero-mean Gaussian process on [0, infinity) whose
covariance, for grid points t_i <= t_j, is

    Sigma_ij = Fbar(t_i v t_j) + Gbar(t_i v t_j)
               - (Fbar(t_i) - Gbar(t_i)) * (Fbar(t_j) - Gbar(t_j)),

with v denoting the maximum and Fbar, Gbar estimated by the empirical
survivals of the two difference samples. The cross moments reduce to the
common survival at the larger grid point because, for s, t >= 0, the
events {X - Y > s} and {Y - X > t} are incompatible.

The p-value upper bound is approximated by simulating the multivariate
normal vector on the grid: p1 counts simulated maxima above the observed
statistic, p2 is one minus the fraction of simulations lying entirely at
or below it (a rectangle probability). With draws shared between the two
estimators they coincide; both are reported so that a deterministic
rectangle-probability algorithm can replace p2 later.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .empirical import EmpiricalSurvival, PairedSample, statistic_stwj, survival_at
from .errors import DegenerateSampleError, NumericalError, ParameterError
from .seeding import make_rng

__all__ = [
    "Grid",
    "GpCovariance",
    "TestResult",
    "build_grid",
    "build_covariance",
    "regularized_cholesky",
    "pvalue_bounds",
    "test_st_wj",
    "test_st_wj_discrete_support",
]

DEFAULT_GRID_POINTS = 100
DEFAULT_N_SIMS = 10_000
DECISION_LEVELS = (0.05, 0.01)


@dataclass(frozen=True, eq=False)
class Grid:
    """Evaluation grid t_0 = 0 < t_1 < ... < t_k."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or len(pts) < 2:
            raise ParameterError("a grid needs at least two points")
        if pts[0] != 0.0:
            raise ParameterError("the first grid point must be exactly 0")
        if np.any(np.diff(pts) <= 0):
            raise ParameterError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def k(self) -> int:
        return len(self.points) - 1


@dataclass(eq=False)
class GpCovariance:
    """Covariance of the limiting Gaussian process on a grid.

    jitter_applied records the diagonal regularization that made the
    Cholesky factorization succeed (0.0 before factorization).
    """

    matrix: np.ndarray
    jitter_applied: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParameterError("covariance must be a square matrix")
        if np.abs(m - m.T).max() > 1e-12:
            raise ParameterError("covariance must be symmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class TestResult:
    """Outcome of the dominance test.

    decisions maps a significance level to True when the test rejects,
    which happens exactly when min(p1, p2) is below the level.
    """

    statistic: float
    p1: float
    p2: float
    n: int
    k: int
    n_sims: int
    seed: int
    jitter: float
    decisions: dict[float, bool] = field(default_factory=dict)

    def reject_at(self, level: float) -> bool:
        return min(self.p1, self.p2) < level

    def to_json_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "p1": self.p1,
            "p2": self.p2,
            "n": self.n,
            "k": self.k,
            "n_sims": self.n_sims,
            "seed": self.seed,
            "jitter": self.jitter,
            "reject_at_0_05": self.reject_at(0.05),
            "reject_at_0_01": self.reject_at(0.01),
        }


def _combined_differences(s: PairedSample) -> np.ndarray:
    d = s.x - s.y
    return np.concatenate([d, -d])


def build_grid(s: PairedSample, k: int = DEFAULT_GRID_POINTS) -> Grid:
    """k+1 equally spaced points from 0 to the largest realized difference."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    max_z = float(_combined_differences(s).max())
    if max_z <= 0.0:
        raise DegenerateSampleError("all paired differences are zero")
    return Grid(np.linspace(0.0, max_z, k + 1))


def build_covariance(g: Grid, s: PairedSample) -> GpCovariance:
    """Covariance matrix with empirical survivals plugged in; no jitter yet."""
    d = s.x - s.y
    f = survival_at(EmpiricalSurvival.from_values(d), g.points)
    gbar = survival_at(EmpiricalSurvival.from_values(-d), g.points)
    gap = f - gbar
    idx = np.arange(len(g.points))
    hi = np.maximum.outer(idx, idx)
    matrix = (f + gbar)[hi] - np.outer(gap, gap)
    return GpCovariance(matrix=matrix)


def regularized_cholesky(c: GpCovariance, eps: float = 1e-10) -> np.ndarray:
    """Lower Cholesky factor of matrix + eps*I, escalating eps by factors
    of 10 up to 1e-6; records the final eps in c.jitter_applied."""
    if eps <= 0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    m = c.matrix
    eye = np.eye(c.dim)
    ladder = [eps]
    while ladder[-1] * 10.0 <= 1e-6 * (1.0 + 1e-9):
        ladder.append(ladder[-1] * 10.0)
    for current in ladder:
        try:
            factor = np.linalg.cholesky(m + current * eye)
        except np.linalg.LinAlgError:
            continue
        c.jitter_applied = current
        return factor
    diag = np.diag(m)
    raise NumericalError(
        f"cholesky failed at jitter {ladder[-1]:.1e} for a "
        f"{c.dim}x{c.dim} covariance (diag range "
        f"[{diag.min():.3e}, {diag.max():.3e}])"
    )


_SIM_CHUNK = 1 << 16


def pvalue_bounds(
    c: GpCovariance, stat: float, n_sims: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo upper bounds for the p-value.

    Draws n_sims zero-mean multivariate normal vectors through the
    regularized Cholesky factor of c. p1 is the fraction of draws whose
    maximum exceeds stat; p2 is one minus the fraction of draws with all
    components at or below stat.

    Draws are generated in fixed-size blocks to bound memory; the block
    structure does not change the stream, so results depend only on
    (c, stat, n_sims, seed).
    """
    if not np.isfinite(stat):
        raise ParameterError(f"statistic must be finite, got {stat}")
    if n_sims < 100:
        raise ParameterError(f"n_sims must be >= 100, got {n_sims}")
    factor = regularized_cholesky(c)
    rng = make_rng(seed)
    exceed = 0
    inside = 0
    remaining = n_sims
    while remaining > 0:
        block = min(remaining, _SIM_CHUNK)
        draws = rng.standard_normal((block, c.dim)) @ factor.T
        exceed += int(np.count_nonzero(draws.max(axis=1) > stat))
        inside += int(np.count_nonzero(np.all(draws <= stat, axis=1)))
        remaining -= block
    p1 = exceed / n_sims
    p2 = 1.0 - inside / n_sims
    return p1, p2


def _run_test(s: PairedSample, grid: Grid, n_sims: int, seed: int) -> TestResult:
    stat = statistic_stwj(s)
    cov = build_covariance(grid, s)
    p1, p2 = pvalue_bounds(cov, stat, n_sims, seed)
    result = TestResult(
        statistic=stat,
        p1=p1,
        p2=p2,
        n=s.n,
        k=grid.k,
        n_sims=n_sims,
        seed=seed,
        jitter=cov.jitter_applied,
        decisions={},
    )
    for level in DECISION_LEVELS:
        result.decisions[level] = result.reject_at(level)
    return result


def test_st_wj(
    s: PairedSample,
    k: int = DEFAULT_GRID_POINTS,
    n_sims: int = DEFAULT_N_SIMS,
    *,
    seed: int,
) -> TestResult:
    """Full test of the null 'X is dominated by Y' on a paired sample.

    Composes the statistic, grid, covariance, factorization and p-value
    bounds; fully deterministic for a fixed seed.
    """
    if s.n < 2:
        raise ParameterError("the test needs at least two pairs")
    grid = build_grid(s, k)
    return _run_test(s, grid, n_sims, seed)


def test_st_wj_discrete_support(
    s: PairedSample, n_sims: int = DEFAULT_N_SIMS, *, seed: int
) -> TestResult:
    """Variant for integer-valued or ordinal data.

    The grid is the sorted distinct realized difference values intersected
    with [0, infinity), plus 0; no interpolation grid is introduced.
    """
    if s.n < 2:
        raise ParameterError("the test needs at least two pairs")
    z = _combined_differences(s)
    if z.max() <= 0.0:
        raise DegenerateSampleError("all paired differences are zero")
    support = np.unique(z[z >= 0])
    points = support if support[0] == 0.0 else np.concatenate(([0.0], support))
    return _run_test(s, Grid(points), n_sims, seed)


# functions named test_* are library API, not pytest tests
test_st_wj.__test__ = False
test_st_wj_discrete_support.__test__ = False
