import dataclasses
import json

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from pairdom.distributions import BivariateNormalParams, Pareto, Weibull
from pairdom.errors import ParameterError
from pairdom.montecarlo import (
    SCENARIOS,
    ExperimentConfig,
    ScenarioSpec,
    generate_scenario,
    run_rejection_experiment,
    scenario,
)


class TestScenarioRegistry:
    def test_fixed_parameters(self):
        assert np.array_equal(SCENARIOS["C1"].normal.mu, [2.0, 4.0])
        assert np.array_equal(SCENARIOS["C2"].normal.mu, [3.0, 1.0])
        assert np.array_equal(SCENARIOS["C3"].normal.mu, [2.0, 2.01])
        for case in ("C1", "C2", "C3"):
            assert np.array_equal(SCENARIOS[case].normal.sigma, [[2.0, 1.5], [1.5, 1.5]])
        assert SCENARIOS["C4"].marginal_x == Pareto(2.0, 1.0)
        assert SCENARIOS["C4"].marginal_y == Pareto(1.5, 1.0)
        assert SCENARIOS["C5"].marginal_x == Pareto(5.0, 4.0)
        assert SCENARIOS["C6"].marginal_x == Weibull(6.0, 2.0)
        assert SCENARIOS["C6"].marginal_y == Weibull(1.5, 1.5)
        assert SCENARIOS["C7"].marginal_x == Weibull(0.75, 4.0)
        assert SCENARIOS["C7"].marginal_y == Weibull(0.25, 1.5)
        assert SCENARIOS["C8"].marginal_x == Weibull(0.5, 2.0)
        assert SCENARIOS["C8"].marginal_y == Weibull(0.9, 1.5)
        for case in ("C4", "C5", "C6", "C7", "C8"):
            assert SCENARIOS[case].theta == 0.5

    def test_specs_immutable(self):
        with pytest.raises(dataclasses.FrozenInstanceError):
            SCENARIOS["C1"].n = 5  # type: ignore[misc]

    def test_unknown_case(self):
        with pytest.raises(ParameterError):
            scenario("C9")

    def test_spec_needs_exactly_one_family(self):
        with pytest.raises(ParameterError):
            ScenarioSpec("bad")
        with pytest.raises(ParameterError):
            ScenarioSpec(
                "bad",
                normal=BivariateNormalParams(np.zeros(2), np.eye(2)),
                theta=0.5,
                marginal_x=Pareto(2, 1),
                marginal_y=Pareto(2, 1),
            )


class TestGenerateScenario:
    def test_c1_means(self):
        s = generate_scenario(scenario("C1"), 100_000, seed=7)
        assert abs(s.x.mean() - 2.0) <= 0.05
        assert abs(s.y.mean() - 4.0) <= 0.05

    def test_c4_pareto_mean(self):
        s = generate_scenario(scenario("C4"), 100_000, seed=8)
        assert abs(s.x.mean() - 2.0) <= 0.1  # a*k/(a-1) = 2

    def test_c6_weibull_mean(self):
        s = generate_scenario(scenario("C6"), 100_000, seed=9)
        assert abs(s.x.mean() - 2.0 * gamma_fn(1.0 + 1.0 / 6.0)) <= 0.02

    def test_deterministic(self):
        a = generate_scenario(scenario("C7"), 200, seed=11)
        b = generate_scenario(scenario("C7"), 200, seed=11)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)


def small_config(case_id: str, n: int, reps: int, tests=("stwj",), seed=505) -> ExperimentConfig:
    return ExperimentConfig(
        scenario=scenario(case_id),
        n=n,
        replications=reps,
        master_seed=seed,
        k=100,
        n_sims=500,
        tests=tests,
    )


class TestRejectionExperiment:
    def test_single_replication_rate_is_binary(self):
        report = run_rejection_experiment(small_config("C2", 30, 1))
        assert report.rate("stwj", 0.05) in (0.0, 1.0)

    def test_c2_power(self):
        report = run_rejection_experiment(small_config("C2", 50, 100))
        assert report.rate("stwj", 0.05) >= 0.98

    def test_c1_size(self):
        report = run_rejection_experiment(small_config("C1", 100, 100))
        assert report.rate("stwj", 0.05) <= 0.01

    def test_monotone_power_in_n(self):
        r20 = run_rejection_experiment(small_config("C2", 20, 100)).rate("stwj", 0.05)
        r50 = run_rejection_experiment(small_config("C2", 50, 100)).rate("stwj", 0.05)
        assert r20 <= r50

    def test_reproducible_reports(self):
        cfg = small_config("C3", 40, 25, tests=("stwj", "t", "wilcoxon"))
        a = run_rejection_experiment(cfg)
        b = run_rejection_experiment(cfg)
        assert a.rates == b.rates
        assert a.failures == b.failures
        assert a.to_csv_text() == b.to_csv_text()
        assert json.dumps(a.to_json_dict()) == json.dumps(b.to_json_dict())

    def test_t_test_tracks_mean_ordering_in_normal_cases(self):
        # with normally distributed differences the mean comparison and the
        # dominance criterion coincide, so the t test mirrors the verdicts
        ordered = run_rejection_experiment(small_config("C1", 50, 60, tests=("t",)))
        reversed_ = run_rejection_experiment(small_config("C2", 50, 60, tests=("t",)))
        assert ordered.rate("t", 0.05) <= 0.02
        assert reversed_.rate("t", 0.05) >= 0.98

    def test_degenerate_scenario_counts_failures(self):
        spec = ScenarioSpec(
            "DEGEN", normal=BivariateNormalParams(np.array([1.0, 1.0]), np.zeros((2, 2)))
        )
        cfg = ExperimentConfig(
            scenario=spec, n=10, replications=5, master_seed=3,
            n_sims=500, tests=("stwj", "t", "wilcoxon"),
        )
        report = run_rejection_experiment(cfg)
        for test in ("stwj", "t", "wilcoxon"):
            assert report.failures[test] == 5
            assert report.rate(test, 0.05) == 0.0

    def test_csv_schema(self):
        report = run_rejection_experiment(small_config("C1", 20, 3, tests=("stwj", "t")))
        lines = report.to_csv_text().strip().split("\n")
        assert lines[0] == "case,n,test,level,rate,failures"
        assert len(lines) == 1 + 2 * 2  # two tests x two levels
        first = lines[1].split(",")
        assert first[0] == "C1" and first[1] == "20" and first[2] == "stwj"

    def test_write_files(self, tmp_path):
        report = run_rejection_experiment(small_config("C1", 20, 3))
        csv_path = tmp_path / "r.csv"
        json_path = tmp_path / "r.json"
        report.write_csv(csv_path)
        report.write_json(json_path)
        assert csv_path.read_text().startswith("case,n,test,level,rate,failures")
        payload = json.loads(json_path.read_text())
        assert payload["case"] == "C1"
        assert payload["rates"][0]["test"] == "stwj"
        assert "wall_time" not in payload

    def test_config_validation(self):
        with pytest.raises(ParameterError):
            small_config("C1", 1, 10)
        with pytest.raises(ParameterError):
            ExperimentConfig(scenario=scenario("C1"), n=10, replications=0, master_seed=1)
        with pytest.raises(ParameterError):
            ExperimentConfig(
                scenario=scenario("C1"), n=10, replications=1, master_seed=1, tests=("bogus",)
            )
        with pytest.raises(ParameterError):
            ExperimentConfig(
                scenario=scenario("C1"), n=10, replications=1, master_seed=1, levels=(1.5,)
            )
