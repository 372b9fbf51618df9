"""The three max-tests and Gaussian power oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classic import sn_statistic
from .critical import (
    _check_correlation,
    bootstrap_cv,
    cv_diag_exact,
    normal_cdf,
    psd_sqrt,
    sup_norm_draws,
)
from .model import AllCoordinatesDegenerate, DomainError, TestReport, TuningConfig, as_array
from .winsor import WinsorStatistic, snw_statistic


def _sup(stats: np.ndarray) -> float:
    return float(np.nanmax(np.abs(stats)))


def run_mean_test(s, cfg: TuningConfig | None = None) -> TestReport:
    cfg = cfg or TuningConfig()
    x = as_array(s)
    n, d = x.shape
    mom = sn_statistic(x)
    if len(mom.degenerate_coords) == d:
        raise AllCoordinatesDegenerate("every coordinate is constant")
    sup = _sup(mom.s_stat)
    cv = cv_diag_exact(d, cfg.alpha)
    return TestReport(
        method="Mean",
        coord_stats=mom.s_stat,
        sup_norm=sup,
        critical_value=cv,
        reject=sup > cv,
        degenerate_coords=mom.degenerate_coords,
        n=n,
        d=d,
    )


def _winsor_report(method: str, ws: WinsorStatistic, cv: float, n: int, d: int) -> TestReport:
    sup = _sup(ws.coord_stats)
    return TestReport(
        method=method,
        coord_stats=ws.coord_stats,
        sup_norm=sup,
        critical_value=cv,
        reject=sup > cv,
        epsilon_used=ws.epsilon,
        epsilon_prime_used=ws.epsilon_prime,
        degenerate_coords=ws.degenerate_coords,
        n=n,
        d=d,
    )


def run_winsor_test(s, cfg: TuningConfig | None = None) -> TestReport:
    cfg = cfg or TuningConfig()
    x = as_array(s)
    n, d = x.shape
    ws = snw_statistic(x, cfg)
    return _winsor_report("Winsor", ws, cv_diag_exact(d, cfg.alpha), n, d)


def winsor_boot_cv(ws: WinsorStatistic, cfg: TuningConfig) -> float:
    """Bootstrap critical value on the non-degenerate block of the robust correlation."""
    active = ws.moments.active
    corr = ws.moments.corr_tilde[np.ix_(active, active)]
    return bootstrap_cv(corr, cfg.alpha, cfg.boot_draws, cfg.seed)


def run_winsor_boot_test(s, cfg: TuningConfig | None = None) -> TestReport:
    cfg = cfg or TuningConfig()
    x = as_array(s)
    n, d = x.shape
    ws = snw_statistic(x, cfg)
    return _winsor_report("WinsorBoot", ws, winsor_boot_cv(ws, cfg), n, d)


def run_both_winsor_tests(s, cfg: TuningConfig) -> tuple[TestReport, TestReport]:
    """Winsor and WinsorBoot reports sharing one computation of S_{n,W}."""
    x = as_array(s)
    n, d = x.shape
    ws = snw_statistic(x, cfg)
    return (
        _winsor_report("Winsor", ws, cv_diag_exact(d, cfg.alpha), n, d),
        _winsor_report("WinsorBoot", ws, winsor_boot_cv(ws, cfg), n, d),
    )


RUNNERS = {
    "Mean": run_mean_test,
    "Winsor": run_winsor_test,
    "WinsorBoot": run_winsor_boot_test,
}


@dataclass(frozen=True)
class PowerScenario:
    """Limit experiment ||corr^{1/2} Z + shift||_inf > critical_value.

    ``shift`` is the standardized mean sqrt(n) D^{-1} mu.
    """

    corr: np.ndarray
    shift: np.ndarray
    critical_value: float

    def __post_init__(self):
        corr = np.atleast_2d(np.asarray(self.corr, dtype=float))
        shift = np.broadcast_to(np.asarray(self.shift, dtype=float), (corr.shape[0],)).copy()
        _check_correlation(corr)
        if not np.all(np.isfinite(shift)):
            raise DomainError("shift must be finite")
        object.__setattr__(self, "corr", corr)
        object.__setattr__(self, "shift", shift)


def gaussian_power_oracle(scn: PowerScenario, draws: int, seed: int) -> float:
    if draws < 100:
        raise DomainError(f"need at least 100 draws, got {draws}")
    root = psd_sqrt(scn.corr, tol=1e-8).root
    sups = sup_norm_draws(root, draws, seed, shift=scn.shift)
    return float(np.mean(sups > scn.critical_value))


def rank_one_power_exact(shift_scalar: float, critical_value: float) -> float:
    """P(|Z + shift| > c) for a standard normal Z."""
    return float(normal_cdf(shift_scalar - critical_value) + normal_cdf(-shift_scalar - critical_value))
