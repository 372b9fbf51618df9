"""Winsorized means, the pair-difference robust covariance and S_{n,W}."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    SQRT_1_5,
    AllCoordinatesDegenerate,
    EpsilonTooLarge,
    InvalidInterval,
    InvalidTuning,
    TuningConfig,
    as_array,
)


def _ceil_index(x: float) -> int:
    # guards against e.g. (1 - 0.4) * 5 == 3.0000000000000004
    return math.ceil(round(x, 9))


def epsilon_n(c: float, eta_bar: float, n: int, d: int) -> float:
    """Winsorization fraction for the mean statistic."""
    if not 1 < c < SQRT_1_5:
        raise InvalidTuning(f"c must lie in (1, sqrt(1.5)), got {c}")
    if not 0 <= eta_bar < 0.5:
        raise InvalidTuning(f"eta_bar must lie in [0, 1/2), got {eta_bar}")
    if n < 2 or d < 1:
        raise InvalidTuning(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    root = math.sqrt(2.0 * (c * c - 1.0))
    lam1 = c / (1.0 - root)
    log_dn = math.log(d * n)
    lam2 = min(
        max(c / (3.0 * (1.0 - root)), c * (math.sqrt(2.0 * (c + 1.0) / (c - 1.0)) + 1.0 / 3.0)),
        c * (math.sqrt(n / (2.0 * log_dn)) + 1.0 / 3.0),
    )
    eps = lam1 * eta_bar + lam2 * log_dn / n
    if eps >= 0.5:
        raise EpsilonTooLarge("epsilon_n", eps)
    return eps


def epsilon_prime_n(c_cov: float, eta_bar: float, n: int, d: int) -> float:
    """Winsorization fraction for the pair-difference covariance estimator."""
    if not c_cov > 1:
        raise InvalidTuning(f"c_cov must exceed 1, got {c_cov}")
    n_pairs = n // 2
    if n_pairs < 1:
        raise InvalidTuning(f"need at least one pair of observations, got n={n}")
    eps = 2.0 * c_cov * eta_bar + c_cov * math.sqrt(math.log(d * d * n_pairs) / (2.0 * n_pairs))
    if eps >= 0.5:
        raise EpsilonTooLarge("epsilon_prime_n", eps)
    return eps


def winsorize_scalar(x: float, a: float, b: float) -> float:
    if a > b:
        raise InvalidInterval(f"lower point {a} exceeds upper point {b}")
    if x < a:
        return a
    if x > b:
        return b
    return x


def _order_indices(n: int, eps: float) -> tuple[int, int]:
    if eps >= 0.5:
        raise EpsilonTooLarge("eps", eps)
    if not eps > 0:
        raise InvalidTuning(f"eps must be positive, got {eps}")
    return _ceil_index(eps * n), _ceil_index((1.0 - eps) * n)


def winsor_points(column, eps: float) -> tuple[float, float]:
    x = np.asarray(column, dtype=float)
    lo, hi = _order_indices(len(x), eps)
    xs = np.sort(x, kind="stable")
    return float(xs[lo - 1]), float(xs[hi - 1])


@dataclass(frozen=True)
class WinsorPoints:
    lower: np.ndarray
    upper: np.ndarray
    lower_index: int
    upper_index: int


def _points_matrix(x: np.ndarray, eps: float) -> WinsorPoints:
    n = x.shape[0]
    lo, hi = _order_indices(n, eps)
    # partition selects the exact order statistics; ties do not affect the value
    part = np.partition(x, (lo - 1, hi - 1), axis=0)
    return WinsorPoints(part[lo - 1].copy(), part[hi - 1].copy(), lo, hi)


def winsorized_mean_stat(s, eps: float) -> tuple[np.ndarray, WinsorPoints]:
    """T_{n,j} = n^{-1/2} sum_i clip(x_ij, lower_j, upper_j)."""
    x = as_array(s)
    pts = _points_matrix(x, eps)
    clipped = np.clip(x, pts.lower, pts.upper)
    return clipped.sum(axis=0) / math.sqrt(x.shape[0]), pts


def pair_differences(s) -> np.ndarray:
    x = as_array(s)
    n_pairs = x.shape[0] // 2
    return (x[1 : 2 * n_pairs : 2] - x[0 : 2 * n_pairs : 2]) / math.sqrt(2.0)


@dataclass
class RobustMoments:
    t_vec: np.ndarray | None
    sigma_tilde: np.ndarray
    cov_tilde: np.ndarray
    corr_tilde: np.ndarray
    n_pairs: int
    degenerate_coords: list[int]

    @property
    def active(self) -> np.ndarray:
        return np.flatnonzero(self.sigma_tilde > 0)


def robust_covariance(s, eps_prime: float) -> RobustMoments:
    """Winsorized Gram matrix of the pair differences.

    Correlation rows and columns of degenerate coordinates (zero scale) are
    left as NaN.
    """
    y = pair_differences(s)
    n_pairs = y.shape[0]
    if n_pairs < 2:
        raise InvalidTuning(f"need at least two pairs of observations, got {n_pairs}")
    pts = _points_matrix(y, eps_prime)
    w = np.clip(y, pts.lower, pts.upper)
    cov = (w.T @ w) / n_pairs
    cov = 0.5 * (cov + cov.T)
    sigma = np.sqrt(np.diag(cov).copy())
    degenerate = [int(j) for j in np.flatnonzero(sigma == 0)]
    corr = np.full_like(cov, np.nan)
    ok = sigma > 0
    var = np.diag(cov)[ok]
    # sqrt of the product keeps identical columns at correlation exactly 1
    denom = np.sqrt(np.outer(var, var))
    bad = ~(np.isfinite(denom) & (denom > 0))  # product under/overflow
    if bad.any():
        sd = np.sqrt(var)
        denom[bad] = np.outer(sd, sd)[bad]
    sub = cov[np.ix_(ok, ok)] / denom
    np.fill_diagonal(sub, 1.0)
    corr[np.ix_(ok, ok)] = np.clip(sub, -1.0, 1.0)
    return RobustMoments(None, sigma, cov, corr, n_pairs, degenerate)


@dataclass
class WinsorStatistic:
    coord_stats: np.ndarray
    epsilon: float
    epsilon_prime: float
    degenerate_coords: list[int]
    moments: RobustMoments
    points: WinsorPoints


def snw_statistic(s, cfg: TuningConfig) -> WinsorStatistic:
    """S_{n,W} = T_n / sigma_tilde, NaN on degenerate coordinates."""
    x = as_array(s)
    n, d = x.shape
    eps = epsilon_n(cfg.c, cfg.eta_bar, n, d)
    eps_p = epsilon_prime_n(cfg.c_cov, cfg.eta_bar, n, d)
    t_vec, pts = winsorized_mean_stat(x, eps)
    mom = robust_covariance(x, eps_p)
    mom.t_vec = t_vec
    if len(mom.degenerate_coords) == d:
        raise AllCoordinatesDegenerate("every coordinate has zero robust scale")
    stats = np.full(d, np.nan)
    ok = mom.sigma_tilde > 0
    stats[ok] = t_vec[ok] / mom.sigma_tilde[ok]
    return WinsorStatistic(stats, eps, eps_p, mom.degenerate_coords, mom, pts)
