"""Scenario generators and the rejection-rate replication harness.

Eight fixed scenarios drive the power study. C1-C3 are bivariate normal
with covariance [[2, 1.5], [1.5, 1.5]] and mean vectors (2, 4), (3, 1)
and (2, 2.01). C4-C8 couple Pareto or Weibull marginals through a
Clayton copula with theta = 0.5:

    C4  X ~ Pareto(2, 1)      Y ~ Pareto(1.5, 1)     (order holds)
    C5  X ~ Pareto(5, 4)      Y ~ Pareto(1.5, 1)     (order fails)
    C6  X ~ Weibull(6, 2)     Y ~ Weibull(1.5, 1.5)  (order fails)
    C7  X ~ Weibull(0.75, 4)  Y ~ Weibull(0.25, 1.5) (order fails)
    C8  X ~ Weibull(0.5, 2)   Y ~ Weibull(0.9, 1.5)  (order fails)

Each replication r of an experiment derives its own seeds from
(master_seed, r), so results are independent of execution order and of
any parallelism in the caller.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import gptest
from .baselines import paired_t_test, wilcoxon_signed_rank
from .distributions import (
    BivariateNormalParams,
    MarginalDist,
    Pareto,
    Weibull,
    sample_bivariate_normal,
    sample_clayton_bivariate,
)
from .empirical import PairedSample
from .errors import DegenerateSampleError, ParameterError
from .seeding import derive_seed

__all__ = [
    "ScenarioSpec",
    "ExperimentConfig",
    "RejectionReport",
    "scenario",
    "generate_scenario",
    "run_rejection_experiment",
    "SCENARIOS",
    "ALL_TESTS",
]

ALL_TESTS = ("stwj", "t", "wilcoxon")


@dataclass(frozen=True)
class ScenarioSpec:
    """One of the fixed simulation scenarios (or a custom one)."""

    case_id: str
    normal: Optional[BivariateNormalParams] = None
    theta: Optional[float] = None
    marginal_x: Optional[MarginalDist] = None
    marginal_y: Optional[MarginalDist] = None

    def __post_init__(self):
        is_normal = self.normal is not None
        is_clayton = (
            self.theta is not None
            and self.marginal_x is not None
            and self.marginal_y is not None
        )
        if is_normal == is_clayton:
            raise ParameterError(
                "a scenario is either bivariate normal or Clayton-coupled marginals"
            )


_NORMAL_COV = np.array([[2.0, 1.5], [1.5, 1.5]])

SCENARIOS: dict[str, ScenarioSpec] = {
    "C1": ScenarioSpec("C1", normal=BivariateNormalParams(np.array([2.0, 4.0]), _NORMAL_COV)),
    "C2": ScenarioSpec("C2", normal=BivariateNormalParams(np.array([3.0, 1.0]), _NORMAL_COV)),
    "C3": ScenarioSpec("C3", normal=BivariateNormalParams(np.array([2.0, 2.01]), _NORMAL_COV)),
    "C4": ScenarioSpec("C4", theta=0.5, marginal_x=Pareto(2.0, 1.0), marginal_y=Pareto(1.5, 1.0)),
    "C5": ScenarioSpec("C5", theta=0.5, marginal_x=Pareto(5.0, 4.0), marginal_y=Pareto(1.5, 1.0)),
    "C6": ScenarioSpec("C6", theta=0.5, marginal_x=Weibull(6.0, 2.0), marginal_y=Weibull(1.5, 1.5)),
    "C7": ScenarioSpec("C7", theta=0.5, marginal_x=Weibull(0.75, 4.0), marginal_y=Weibull(0.25, 1.5)),
    "C8": ScenarioSpec("C8", theta=0.5, marginal_x=Weibull(0.5, 2.0), marginal_y=Weibull(0.9, 1.5)),
}


def scenario(case_id: str) -> ScenarioSpec:
    try:
        return SCENARIOS[case_id]
    except KeyError:
        raise ParameterError(f"unknown case {case_id!r}; expected C1..C8") from None


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioSpec
    n: int
    replications: int
    master_seed: int
    k: int = 100
    n_sims: int = 2000
    levels: tuple[float, ...] = (0.05, 0.01)
    tests: tuple[str, ...] = ("stwj",)

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"n must be >= 2, got {self.n}")
        if self.replications < 1:
            raise ParameterError("replications must be >= 1")
        if not self.levels or any(not (0.0 < lv < 1.0) for lv in self.levels):
            raise ParameterError("levels must lie in (0, 1)")
        unknown = set(self.tests) - set(ALL_TESTS)
        if unknown or not self.tests:
            raise ParameterError(f"tests must be a nonempty subset of {ALL_TESTS}")


@dataclass(eq=False)
class RejectionReport:
    """Rejection rates per (test, level), with failure counts.

    A replication whose test raises a degenerate-sample error counts as a
    failure for that test and as a non-rejection in the rate; failures are
    reported separately, never silently dropped. wall_time is informative
    only and is excluded from the serialized forms so that identical
    configurations produce byte-identical artifacts.
    """

    case_id: str
    n: int
    replications: int
    master_seed: int
    k: int
    n_sims: int
    levels: tuple[float, ...]
    tests: tuple[str, ...]
    rates: dict[tuple[str, float], float] = field(default_factory=dict)
    failures: dict[str, int] = field(default_factory=dict)
    wall_time: float = 0.0

    def rate(self, test: str, level: float) -> float:
        return self.rates[(test, level)]

    def to_csv_text(self) -> str:
        lines = ["case,n,test,level,rate,failures"]
        for test in self.tests:
            for level in self.levels:
                lines.append(
                    f"{self.case_id},{self.n},{test},{level!r},"
                    f"{self.rates[(test, level)]!r},{self.failures[test]}"
                )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "case": self.case_id,
            "n": self.n,
            "replications": self.replications,
            "master_seed": self.master_seed,
            "k": self.k,
            "n_sims": self.n_sims,
            "levels": list(self.levels),
            "tests": list(self.tests),
            "rates": [
                {
                    "test": test,
                    "level": level,
                    "rate": self.rates[(test, level)],
                    "failures": self.failures[test],
                }
                for test in self.tests
                for level in self.levels
            ],
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())

    def write_json(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")


def generate_scenario(spec: ScenarioSpec, n: int, seed: int) -> PairedSample:
    """Draw a paired sample from a scenario; deterministic per seed."""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if spec.normal is not None:
        return sample_bivariate_normal(spec.normal, n, seed)
    return sample_clayton_bivariate(spec.theta, spec.marginal_x, spec.marginal_y, n, seed)


def _rejections(sample: PairedSample, test: str, cfg: ExperimentConfig, seed: int) -> list[bool]:
    if test == "stwj":
        result = gptest.test_st_wj(sample, cfg.k, cfg.n_sims, seed=seed)
        return [result.reject_at(level) for level in cfg.levels]
    if test == "t":
        p = paired_t_test(sample).p_value
    else:
        p = wilcoxon_signed_rank(sample).p_value
    return [p < level for level in cfg.levels]


def run_rejection_experiment(cfg: ExperimentConfig) -> RejectionReport:
    """Run the replication loop and aggregate rejection rates.

    Replication r draws its sample with seed (master_seed, r, 0) and runs
    the dominance test with seed (master_seed, r, 1); aggregation is
    commutative counting, so any execution order gives the same report.
    """
    started = time.perf_counter()
    counts = {(test, level): 0 for test in cfg.tests for level in cfg.levels}
    failures = {test: 0 for test in cfg.tests}
    for r in range(cfg.replications):
        sample = generate_scenario(cfg.scenario, cfg.n, derive_seed(cfg.master_seed, r, 0))
        test_seed = derive_seed(cfg.master_seed, r, 1)
        for test in cfg.tests:
            try:
                rejected = _rejections(sample, test, cfg, test_seed)
            except DegenerateSampleError:
                failures[test] += 1
                continue
            for level, rej in zip(cfg.levels, rejected):
                if rej:
                    counts[(test, level)] += 1
    rates = {key: counts[key] / cfg.replications for key in counts}
    return RejectionReport(
        case_id=cfg.scenario.case_id,
        n=cfg.n,
        replications=cfg.replications,
        master_seed=cfg.master_seed,
        k=cfg.k,
        n_sims=cfg.n_sims,
        levels=cfg.levels,
        tests=cfg.tests,
        rates=rates,
        failures=failures,
        wall_time=time.perf_counter() - started,
    )
