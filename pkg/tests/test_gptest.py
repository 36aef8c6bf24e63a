import json

import numpy as np
import pytest
from scipy.special import ndtr

from pairdom import gptest
from pairdom.empirical import PairedSample
from pairdom.errors import DegenerateSampleError, NumericalError, ParameterError
from pairdom.gptest import (
    GpCovariance,
    Grid,
    build_covariance,
    build_grid,
    pvalue_bounds,
    regularized_cholesky,
)
from pairdom.montecarlo import generate_scenario, scenario


def case_sample(case_id: str, n: int, seed: int) -> PairedSample:
    return generate_scenario(scenario(case_id), n, seed)


class TestGrid:
    def test_equal_spacing(self):
        s = PairedSample(np.array([2.0, 0.0]), np.array([0.0, 0.0]))  # max(Z) = 2
        g = build_grid(s, 4)
        assert np.allclose(g.points, [0.0, 0.5, 1.0, 1.5, 2.0])
        assert g.k == 4

    def test_minimal_grid(self):
        s = PairedSample(np.array([1.0, 0.0]), np.array([0.0, 0.0]))
        g = build_grid(s, 1)
        assert np.array_equal(g.points, [0.0, 1.0])

    def test_degenerate_sample(self):
        x = np.array([1.0, 2.0, 3.0])
        with pytest.raises(DegenerateSampleError):
            build_grid(PairedSample(x, x.copy()), 10)

    def test_grid_invariants(self):
        with pytest.raises(ParameterError):
            Grid(np.array([0.5, 1.0]))
        with pytest.raises(ParameterError):
            Grid(np.array([0.0, 1.0, 1.0]))
        with pytest.raises(ParameterError):
            Grid(np.array([0.0]))


class TestCovariance:
    def test_equal_survivals_diagonal(self):
        # symmetric differences: Fbar_n = Gbar_n at every point, so
        # Sigma_ii = 2 * Fbar_n(t_i)
        x = np.array([1.0, -1.0, 2.0, -2.0])
        s = PairedSample(x, np.zeros(4))
        g = build_grid(s, 4)
        cov = build_covariance(g, s)
        d = np.sort(x)
        for i, t in enumerate(g.points):
            fbar = np.mean(d > t)
            assert cov.matrix[i, i] == pytest.approx(2.0 * fbar, abs=1e-12)

    def test_point_beyond_support_is_zero(self):
        s = PairedSample(np.array([1.0, -1.0]), np.zeros(2))
        g = Grid(np.array([0.0, 1.0, 5.0]))
        cov = build_covariance(g, s)
        assert cov.matrix[2, 2] == 0.0

    def test_hand_computed_entry(self):
        s = PairedSample(np.array([3.0, 4.0]), np.array([1.0, 1.0]))
        g = Grid(np.array([0.0, 3.0]))
        cov = build_covariance(g, s)
        # Fbar(0) = 1, Gbar(0) = 0: 1 + 0 - (1 - 0)^2 = 0
        assert cov.matrix[0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_symmetry_and_max_rule(self):
        s = case_sample("C1", 200, seed=3)
        g = build_grid(s, 25)
        cov = build_covariance(g, s)
        m = cov.matrix
        assert np.abs(m - m.T).max() <= 1e-12
        d = s.x - s.y
        fbar = lambda t: np.mean(d > t)
        gbar = lambda t: np.mean(-d > t)
        for i, j in [(0, 5), (3, 20), (7, 7)]:
            ti, tj = g.points[i], g.points[j]
            hi = max(ti, tj)
            expected = (
                fbar(hi)
                + gbar(hi)
                - (fbar(ti) - gbar(ti)) * (fbar(tj) - gbar(tj))
            )
            assert m[i, j] == pytest.approx(expected, abs=1e-12)


class TestRegularizedCholesky:
    def test_identity(self):
        cov = GpCovariance(np.eye(3))
        factor = regularized_cholesky(cov)
        assert cov.jitter_applied == 1e-10
        assert np.allclose(factor, np.eye(3), atol=1e-5)

    def test_zero_matrix(self):
        cov = GpCovariance(np.zeros((4, 4)))
        factor = regularized_cholesky(cov, eps=1e-10)
        assert np.allclose(factor, np.sqrt(1e-10) * np.eye(4), atol=1e-12)

    def test_reconstruction(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((6, 6))
        m = a @ a.T
        cov = GpCovariance(m)
        factor = regularized_cholesky(cov)
        assert np.abs(factor @ factor.T - (m + cov.jitter_applied * np.eye(6))).max() <= 1e-8

    def test_escalation_on_indefinite(self):
        m = np.eye(3)
        m[2, 2] = -5e-9  # small negative pivot, cured by the jitter ladder
        cov = GpCovariance(m)
        factor = regularized_cholesky(cov)
        assert cov.jitter_applied > 1e-10
        assert np.isfinite(factor).all()

    def test_hard_failure(self):
        m = np.eye(2)
        m[1, 1] = -1.0
        with pytest.raises(NumericalError):
            regularized_cholesky(GpCovariance(m))


class TestPvalueBounds:
    def test_extreme_statistics(self):
        cov = GpCovariance(np.eye(3))
        assert pvalue_bounds(cov, 1e9, 500, seed=1) == (0.0, 0.0)
        cov2 = GpCovariance(np.eye(3))
        assert pvalue_bounds(cov2, -1e9, 500, seed=1) == (1.0, 1.0)

    def test_univariate_calibration(self):
        # P(Z > 1.645) for a unit-variance point, against the normal CDF
        cov = GpCovariance(np.array([[1.0]]))
        p1, p2 = pvalue_bounds(cov, 1.645, 200_000, seed=42)
        expected = 1.0 - ndtr(1.645)
        assert p1 == pytest.approx(expected, abs=0.005)

    def test_shared_draw_estimators_coincide(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((4, 4))
        cov = GpCovariance(a @ a.T)
        p1, p2 = pvalue_bounds(cov, 0.7, 2000, seed=9)
        assert p1 == p2

    def test_monotone_in_statistic(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((5, 5))
        m = a @ a.T
        ps = []
        for stat in (0.0, 0.5, 1.0, 2.0, 4.0):
            p1, _ = pvalue_bounds(GpCovariance(m.copy()), stat, 4000, seed=11)
            ps.append(p1)
        assert all(x >= y for x, y in zip(ps, ps[1:]))

    def test_n_sims_floor(self):
        with pytest.raises(ParameterError):
            pvalue_bounds(GpCovariance(np.eye(2)), 0.0, 99, seed=0)


class TestFullTest:
    def test_case2_rejects(self):
        s = case_sample("C2", 500, seed=21)
        res = gptest.test_st_wj(s, 100, 2000, seed=22)
        assert res.reject_at(0.05)
        assert res.decisions[0.05] is True

    def test_case1_retains(self):
        s = case_sample("C1", 500, seed=23)
        res = gptest.test_st_wj(s, 100, 2000, seed=24)
        assert not res.reject_at(0.05)

    def test_symmetric_differences_large_p(self):
        half = np.array([0.3, 0.7, 1.1, 2.4, 0.05])
        x = np.concatenate([half, -half])
        s = PairedSample(x, -x)
        res = gptest.test_st_wj(s, 50, 2000, seed=31)
        assert res.statistic == 0.0
        assert res.p1 > 0.3

    def test_determinism(self):
        s = case_sample("C3", 120, seed=40)
        a = gptest.test_st_wj(s, 100, 2000, seed=41)
        b = gptest.test_st_wj(s, 100, 2000, seed=41)
        assert a == b

    def test_result_json_keys(self):
        s = case_sample("C1", 50, seed=1)
        res = gptest.test_st_wj(s, 10, 500, seed=2)
        payload = res.to_json_dict()
        assert list(payload) == [
            "statistic", "p1", "p2", "n", "k", "n_sims", "seed", "jitter",
            "reject_at_0_05", "reject_at_0_01",
        ]
        json.dumps(payload)  # serializable

    def test_degenerate_sample_raises(self):
        x = np.array([2.0, 2.0, 2.0])
        with pytest.raises(DegenerateSampleError):
            gptest.test_st_wj(PairedSample(x, x.copy()), seed=1)

    def test_conservative_under_null_boundary(self):
        # strongly ordered case: empirical size far below the level
        rejections = 0
        reps = 500
        for r in range(reps):
            s = case_sample("C1", 200, seed=10_000 + r)
            res = gptest.test_st_wj(s, 100, 500, seed=20_000 + r)
            rejections += res.reject_at(0.05)
        assert rejections / reps <= 0.07

    def test_consistency_under_alternative(self):
        rates = []
        for n in (20, 50, 100):
            rejections = 0
            reps = 200
            for r in range(reps):
                s = case_sample("C2", n, seed=30_000 + r)
                res = gptest.test_st_wj(s, 100, 500, seed=40_000 + r)
                rejections += res.reject_at(0.05)
            rates.append(rejections / reps)
        assert all(a <= b for a, b in zip(rates, rates[1:]))
        assert rates[1] >= 0.99


class TestDiscreteSupportVariant:
    def test_grid_from_realized_support(self):
        s = PairedSample(np.array([3.0, 4.0, 2.0]), np.array([1.0, 1.0, 5.0]))
        res = gptest.test_st_wj_discrete_support(s, 2000, seed=3)
        # distinct nonnegative realized differences {2, 3} plus 0
        assert res.k == 2

    def test_grid_includes_zero_once(self):
        s = PairedSample(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        res = gptest.test_st_wj_discrete_support(s, 2000, seed=3)
        assert res.k == 1  # grid {0, 1}

    def test_constant_sample_degenerate(self):
        x = np.array([1.0, 1.0, 1.0])
        with pytest.raises(DegenerateSampleError):
            gptest.test_st_wj_discrete_support(PairedSample(x, x.copy()), seed=1)

    def test_ordinal_data_end_to_end(self):
        rng = np.random.default_rng(61)
        x = rng.integers(0, 6, 80).astype(float)
        y = x + rng.integers(0, 3, 80)
        res = gptest.test_st_wj_discrete_support(PairedSample(x, y.astype(float)), 2000, seed=62)
        assert not res.reject_at(0.05)
