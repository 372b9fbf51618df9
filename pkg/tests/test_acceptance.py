"""Acceptance criteria A1-A12 at their stated tolerances.

Each test records one PASS/FAIL line that is repeated in the terminal
summary. Seeds are fixed up front (data seed 0, tuning seed 1) and are not
tuned to the outcome.
"""

import math
import os

import numpy as np
import pytest
from acceptance_log import record
from oracles import robust_cov_naive, sn_naive

from robust_maxtest.classic import sn_statistic
from robust_maxtest.critical import (
    bootstrap_cv,
    cv_diag_exact,
    cv_diag_expansion,
    diag_max_cdf,
    gumbel_constants,
    mc_sup_quantile,
    normal_quantile,
)
from robust_maxtest.dgp import ContaminationPlan, CorrelationModel, build_correlation, contaminate, tail_exchange
from robust_maxtest.harness import ExperimentSpec, run_experiment
from robust_maxtest.maxtests import PowerScenario, gaussian_power_oracle, rank_one_power_exact, run_mean_test, run_winsor_test
from robust_maxtest.winsor import epsilon_n, epsilon_prime_n, robust_covariance, winsorized_mean_stat

DATA_SEED = 0
TUNING_SEED = 1
THREADS = os.cpu_count() or 1

pytestmark = pytest.mark.slow


def experiment(scenario, methods, replications, **kw):
    spec = ExperimentSpec.from_dict(
        {
            "scenario": {"seed": DATA_SEED, **scenario},
            "tuning": {"seed": TUNING_SEED, **kw.pop("tuning", {})},
            "methods": methods,
            "replications": replications,
            **kw,
        }
    )
    return run_experiment(spec, threads=THREADS)


def test_a1_exact_vs_monte_carlo():
    exact = cv_diag_exact(50, 0.05)
    mc = mc_sup_quantile(np.eye(50), 0.05, 200_000, TUNING_SEED)
    gap = abs(exact - mc)
    assert record("A1", gap <= 0.01, f"exact={exact:.5f} mc={mc:.5f} gap={gap:.5f} (tol 0.01)")


def test_a2_bootstrap_dominance():
    rng = np.random.default_rng(DATA_SEED)
    diag = cv_diag_exact(30, 0.05)
    eps_prime = epsilon_prime_n(1.1, 0.0, 500, 30)
    worst = -np.inf
    for k in range(50):
        mix = rng.normal(size=(30, 30))
        x = rng.normal(size=(500, 30)) @ mix
        corr = robust_covariance(x, eps_prime).corr_tilde
        worst = max(worst, bootstrap_cv(corr, 0.05, 100_000, TUNING_SEED + k) - diag)
    assert record("A2", worst <= 0.02, f"max(c_boot - c_diag) over 50 datasets = {worst:.5f} (tol 0.02)")


def test_a3_rank_one_gap():
    n, d = 2000, 100
    res = experiment(
        {"n": n, "d": d, "correlation": {"kind": "RankOne"}, "mu": 3 / math.sqrt(n)},
        ["Winsor", "WinsorBoot"],
        500,
        tuning={"boot_draws": 2000},
    )
    target_w = rank_one_power_exact(3, cv_diag_exact(d, 0.05))
    target_b = rank_one_power_exact(3, float(normal_quantile(0.975)))
    w = res.methods["Winsor"].reject_rate
    b = res.methods["WinsorBoot"].reject_rate
    ok_w, ok_b, ok_gap = abs(w - target_w) <= 0.10, abs(b - target_b) <= 0.10, b - w >= 0.35
    detail = (
        f"Winsor={w:.3f} vs {target_w:.3f} [{'ok' if ok_w else 'out'}], "
        f"WinsorBoot={b:.3f} vs {target_b:.3f} [{'ok' if ok_b else 'out'}], "
        f"gap={b - w:.3f} (need >= 0.35) [{'ok' if ok_gap else 'short'}]"
    )
    assert record("A3", ok_w and ok_b and ok_gap, detail)


def test_a4_equivariance():
    rng = np.random.default_rng(DATA_SEED)
    worst = 0.0
    eps = 0.1
    for _ in range(20):
        x = rng.normal(size=(50, 5)) * rng.uniform(0.5, 3, size=5)
        a = rng.normal(size=5)
        b = rng.uniform(0.2, 5)
        n = x.shape[0]
        t, _ = winsorized_mean_stat(x, eps)
        t_shift, _ = winsorized_mean_stat(x + a, eps)
        t_scale, _ = winsorized_mean_stat(b * x, eps)
        cov = robust_covariance(x, eps).cov_tilde
        cov_shift = robust_covariance(x + a, eps).cov_tilde
        s = sn_statistic(x).s_stat
        s_scale = sn_statistic(x * rng.uniform(0.1, 10, size=5)).s_stat

        def rel(u, v):
            return float(np.max(np.abs(u - v) / np.maximum(np.abs(v), 1.0)))

        worst = max(
            worst,
            rel(t_shift, t + math.sqrt(n) * a),
            rel(t_scale, b * t),
            rel(cov_shift, cov),
            rel(s_scale, s),
        )
    assert record("A4", worst <= 1e-10, f"max relative deviation {worst:.2e} (tol 1e-10)")


def test_a5_contamination_invariance():
    n, d = 400, 10
    x = np.random.default_rng(DATA_SEED).normal(size=(n, d))
    eps = epsilon_n(1.1, 0.0, n, d)
    k = min(math.ceil(eps * n) - 1, n - math.ceil((1 - eps) * n))
    # the attack touches more rows than any admissible budget, so it is applied directly
    dirty, rows = tail_exchange(x, k)
    clean_rep = run_winsor_test(x).to_dict(verbose=True)
    dirty_rep = run_winsor_test(dirty).to_dict(verbose=True)
    identical = clean_rep == dirty_rep
    max_diff = float(np.max(np.abs(np.subtract(clean_rep["coord_stats"], dirty_rep["coord_stats"]))))

    out, _ = contaminate(x, ContaminationPlan("GrossOutlier", 3.5 / n, {"magnitude": 1e6, "coords": list(range(d))}), seed=DATA_SEED)
    moved = abs(run_mean_test(out).sup_norm - run_mean_test(x).sup_norm)
    detail = (
        f"TailExchange(k={k}, {len(rows)} rows) report identical={identical} "
        f"(max |coord_stats diff|={max_diff:.3g}); GrossOutlier moves Mean sup_norm by {moved:.3g} (need > 1e-3)"
    )
    assert record("A5", identical and moved > 1e-3, detail)


def test_a6_size_trend():
    sizes, half = [], []
    for n in (500, 2000, 8000, 32000):
        mr = experiment({"n": n, "d": 10}, ["Winsor"], 1000).methods["Winsor"]
        sizes.append(mr.reject_rate)
        half.append(mr.mc_halfwidth)
    end_ok = 0.02 <= sizes[-1] <= 0.08
    steps_ok = all(sizes[i + 1] - sizes[i] <= 0.01 + 2 * max(half[i], half[i + 1]) for i in range(3))
    seq = ", ".join(f"{s:.3f}" for s in sizes)
    assert record("A6", end_ok and steps_ok, f"Winsor size n=500..32000: [{seq}] (end in [0.02, 0.08], no step up)")


def test_a7_classic_size():
    rate = experiment({"n": 2000, "d": 50}, ["Mean"], 2000).methods["Mean"].reject_rate
    assert record("A7", 0.035 <= rate <= 0.065, f"Mean size={rate:.4f} (band [0.035, 0.065])")


def test_a8_expansion():
    gap_big = abs(cv_diag_expansion(10**6, 0.05) - cv_diag_exact(10**6, 0.05))
    gap_small = abs(cv_diag_expansion(100, 0.05) - cv_diag_exact(100, 0.05))
    ok = gap_big <= 0.05 and gap_big < gap_small
    assert record("A8", ok, f"gap at 1e6={gap_big:.5f} (tol 0.05), gap at 100={gap_small:.5f}")


def test_a9_gumbel_limit():
    d = 10**6
    g = gumbel_constants(d)
    err = max(abs(diag_max_cdf(g.b_d + x / g.a_d, d) - float(g.limit_cdf(x))) for x in range(-2, 5))
    assert record("A9", err <= 0.02, f"sup error={err:.5f} (tol 0.02)")


def _ar1_power_run():
    n, d = 8000, 20
    res = experiment(
        {"n": n, "d": d, "correlation": {"kind": "AR1", "param": 0.5}, "mu": {"sparse": [[0, 4 / math.sqrt(n)]]}},
        ["Winsor", "WinsorBoot"],
        1000,
    )
    corr = build_correlation(d, CorrelationModel("AR1", 0.5))
    shift = np.zeros(d)
    shift[0] = 4.0
    oracle = gaussian_power_oracle(PowerScenario(corr, shift, cv_diag_exact(d, 0.05)), 100_000, TUNING_SEED)
    return res, oracle


@pytest.fixture(scope="module")
def ar1_power():
    return _ar1_power_run()


def test_a10_power_oracle(ar1_power):
    res, oracle = ar1_power
    w = res.methods["Winsor"].reject_rate
    gap = abs(w - oracle)
    assert record("A10", gap <= 0.05, f"Winsor power={w:.3f} oracle={oracle:.3f} gap={gap:.3f} (tol 0.05)")


def test_a11_no_gain(ar1_power):
    res, _ = ar1_power
    w = res.methods["Winsor"].reject_rate
    b = res.methods["WinsorBoot"].reject_rate
    assert record("A11", abs(w - b) <= 0.05, f"Winsor={w:.3f} WinsorBoot={b:.3f} |diff|={abs(w - b):.3f} (tol 0.05)")


def test_a12_brute_force():
    rng = np.random.default_rng(DATA_SEED)
    worst = 0.0
    for i in range(100):
        x = rng.normal(size=(6, 3))
        eps = (0.2, 0.34, 0.45)[i % 3]
        got = robust_covariance(x, eps).cov_tilde
        want = np.array(robust_cov_naive(x.tolist(), eps))
        worst = max(worst, float(np.max(np.abs(got - want)) / np.max(np.abs(want))))
        got_s = sn_statistic(x).s_stat
        want_s = np.array(sn_naive(x.tolist()))
        worst = max(worst, float(np.max(np.abs(got_s - want_s) / np.abs(want_s))))
    assert record("A12", worst <= 1e-12, f"max relative error {worst:.2e} (tol 1e-12)")
