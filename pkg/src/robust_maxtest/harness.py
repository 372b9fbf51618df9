"""Monte Carlo size/power experiments for the three max-tests."""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._rng import derive_seed
from .critical import cv_diag_exact, mc_sup_quantile
from .dgp import Scenario
from .maxtests import PowerScenario, gaussian_power_oracle, run_both_winsor_tests, run_mean_test, run_winsor_test
from .model import METHODS, InvalidParameter, RobustMaxTestError, TuningConfig

CSV_COLUMNS = ("label", "n", "d", "method", "reject_rate", "mc_halfwidth", "oracle_power", "seed")
DEFAULT_ORACLE_DRAWS = 20000


class ReplicationError(RobustMaxTestError):
    def __init__(self, replication: int, error: Exception):
        self.replication = replication
        self.error = error
        super().__init__(f"replication {replication} failed: {type(error).__name__}: {error}")


@dataclass(frozen=True)
class ExperimentSpec:
    scenario: Scenario
    tuning: TuningConfig = TuningConfig()
    methods: tuple[str, ...] = ("Mean", "Winsor", "WinsorBoot")
    replications: int = 100
    oracle_draws: int = 0
    label: str = ""

    def __post_init__(self):
        if self.replications < 1:
            raise InvalidParameter(f"replications must be at least 1, got {self.replications}")
        if not self.methods:
            raise InvalidParameter("at least one method is required")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise InvalidParameter(f"unknown methods {bad}; choose from {list(METHODS)}")
        object.__setattr__(self, "methods", tuple(self.methods))

    @classmethod
    def from_dict(cls, spec: dict) -> ExperimentSpec:
        tuning = TuningConfig(**spec.get("tuning", {}))
        return cls(
            scenario=Scenario.from_dict(spec["scenario"]),
            tuning=tuning,
            methods=tuple(spec.get("methods", METHODS)),
            replications=int(spec.get("replications", 100)),
            oracle_draws=int(spec.get("oracle_draws", 0)),
            label=str(spec.get("label", "")),
        )


@dataclass
class MethodResult:
    reject_count: int
    reject_rate: float
    mc_halfwidth: float
    oracle_power: float | None = None
    reject_flags: np.ndarray = field(default=None, repr=False)


@dataclass
class ExperimentResult:
    methods: dict[str, MethodResult]
    wallclock_seconds: float
    # replications where the bootstrap critical value exceeded the diagonal one
    boot_excess: int = 0


def load_suite(path) -> list[ExperimentSpec]:
    with Path(path).open() as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise InvalidParameter("suite file must hold a JSON array of experiment specs")
    return [ExperimentSpec.from_dict(item) for item in raw]


def _one_replication(spec: ExperimentSpec, corr: np.ndarray, r: int) -> tuple[dict, bool]:
    scn = spec.scenario
    sample, _ = scn.draw(derive_seed(scn.seed, r), corr)
    cfg = replace(spec.tuning, seed=derive_seed(spec.tuning.seed, r))
    flags = {}
    excess = False
    if "Mean" in spec.methods:
        flags["Mean"] = run_mean_test(sample, cfg).reject
    if "WinsorBoot" in spec.methods:
        w, wb = run_both_winsor_tests(sample, cfg)
        flags["WinsorBoot"] = wb.reject
        if "Winsor" in spec.methods:
            flags["Winsor"] = w.reject
        excess = wb.critical_value > w.critical_value
    elif "Winsor" in spec.methods:
        flags["Winsor"] = run_winsor_test(sample, cfg).reject
    return flags, excess


def oracle_critical_value(method: str, corr: np.ndarray, tuning: TuningConfig, draws: int) -> float:
    """Critical value in the limit experiment: c_{1-alpha} for fixed-cv tests, c_{1-alpha}(corr) for the bootstrap."""
    if method == "WinsorBoot":
        return mc_sup_quantile(corr, tuning.alpha, draws, derive_seed(tuning.seed, 2**32 + 1))
    return cv_diag_exact(corr.shape[0], tuning.alpha)


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    start = time.perf_counter()
    corr = spec.scenario.corr_matrix()
    R = spec.replications

    def task(r):
        try:
            return _one_replication(spec, corr, r)
        except Exception as exc:  # noqa: BLE001 - reported with the replication index
            raise ReplicationError(r, exc) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(task, range(R)))
    else:
        outcomes = [task(r) for r in range(R)]

    shift = spec.scenario.standardized_shift()
    draws = spec.oracle_draws or (DEFAULT_ORACLE_DRAWS if np.any(shift != 0) else 0)
    results = {}
    for method in spec.methods:
        flags = np.array([o[0][method] for o in outcomes], dtype=bool)
        count = int(flags.sum())
        rate = count / R
        oracle = None
        if draws:
            cv = oracle_critical_value(method, corr, spec.tuning, draws)
            oracle = gaussian_power_oracle(PowerScenario(corr, shift, cv), draws, derive_seed(spec.tuning.seed, 2**32))
        results[method] = MethodResult(count, rate, 1.96 * math.sqrt(rate * (1 - rate) / R), oracle, flags)
    excess = sum(o[1] for o in outcomes)
    return ExperimentResult(results, time.perf_counter() - start, int(excess))


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def result_rows(results) -> list[dict]:
    rows = []
    for spec, res in results:
        for method in spec.methods:
            mr = res.methods[method]
            rows.append(
                {
                    "label": spec.label,
                    "n": spec.scenario.n,
                    "d": spec.scenario.d,
                    "method": method,
                    "reject_rate": _fmt(mr.reject_rate),
                    "mc_halfwidth": _fmt(mr.mc_halfwidth),
                    "oracle_power": _fmt(mr.oracle_power),
                    "seed": spec.scenario.seed,
                }
            )
    return rows


def emit_results_csv(results, path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(result_rows(results))
