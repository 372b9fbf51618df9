"""Critical values for max-statistics.

Covers the exact quantile of max_j |Z_j| for independent coordinates, its
Gumbel-type expansion, PSD square roots and Monte Carlo quantiles of
correlated Gaussian maxima (which is also how the bootstrap critical value is
computed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from ._rng import substream
from .model import DegenerateCorrelation, DomainError, EigenFailure, NotSymmetric

MC_BLOCK = 4096


def normal_quantile(p):
    return ndtri(p)


def normal_cdf(x):
    return ndtr(x)


def _check_level(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def cv_diag_exact(d: int, alpha: float) -> float:
    """(1 - alpha)-quantile of max_j |Z_j| for d independent standard normals."""
    if d < 1:
        raise DomainError(f"d must be positive, got {d}")
    _check_level(alpha)
    # upper tail 1 - Phi(c) = (1 - (1 - alpha)^(1/d)) / 2, computed without cancellation
    tail = -math.expm1(math.log1p(-alpha) / d) / 2.0
    return float(-ndtri(tail))


def diag_max_cdf(c: float, d: int) -> float:
    """P(max_j |Z_j| <= c) = (2 Phi(c) - 1)^d."""
    if c <= 0:
        return 0.0
    return math.exp(d * math.log1p(-2.0 * float(ndtr(-c))))


def cv_diag_expansion(d: int, alpha: float) -> float:
    if d < 3:
        raise DomainError(f"the expansion needs d >= 3, got {d}")
    _check_level(alpha)
    a = math.sqrt(2.0 * math.log(d))
    return (
        a
        - (math.log(math.log(d)) + math.log(4.0 * math.pi)) / (2.0 * a)
        - math.log(-math.log1p(-alpha) / 2.0) / a
    )


@dataclass(frozen=True)
class GumbelConstants:
    a_d: float
    b_d: float

    def limit_cdf(self, x):
        """exp(-2 exp(-x)), the limit law of a_d (max_j |Z_j| - b_d)."""
        return np.exp(-2.0 * np.exp(-np.asarray(x, dtype=float)))


def gumbel_constants(d: int) -> GumbelConstants:
    if d < 3:
        raise DomainError(f"need d >= 3, got {d}")
    a = math.sqrt(2.0 * math.log(d))
    return GumbelConstants(a, a - (math.log(math.log(d)) + math.log(4.0 * math.pi)) / (2.0 * a))


@dataclass(frozen=True)
class PSDRoot:
    root: np.ndarray
    clipped_eigs: int


def psd_sqrt(a, tol: float = 1e-10) -> PSDRoot:
    """Symmetric PSD square root.

    Eigenvalues below d * machine-eps * largest eigenvalue (in particular all
    negative ones) are rounding noise and are floored at zero; their count is
    reported as ``clipped_eigs``.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > tol:
        raise NotSymmetric(f"max |a_jk - a_kj| = {asym:.3g} exceeds tol {tol:.3g}")
    try:
        lam, vec = np.linalg.eigh(0.5 * (a + a.T))
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    cutoff = a.shape[0] * np.finfo(float).eps * max(float(lam[-1]), 0.0) if lam.size else 0.0
    floor = lam <= cutoff
    lam = np.where(floor, 0.0, lam)
    root = (vec * np.sqrt(lam)) @ vec.T
    return PSDRoot(0.5 * (root + root.T), int(floor.sum()))


def _check_correlation(corr: np.ndarray, tol: float = 1e-8) -> None:
    if corr.ndim != 2 or corr.shape[0] != corr.shape[1] or corr.shape[0] == 0:
        raise DegenerateCorrelation(f"expected a non-empty square matrix, got shape {corr.shape}")
    if not np.all(np.isfinite(corr)):
        raise DegenerateCorrelation("correlation matrix has non-finite entries")
    if np.max(np.abs(np.diag(corr) - 1.0)) > tol:
        raise DegenerateCorrelation("correlation matrix must have unit diagonal")


def order_stat_index(level: float, draws: int) -> int:
    """1-based index ceil(level * draws), robust to binary rounding."""
    return max(1, min(draws, math.ceil(round(level * draws, 9))))


def sup_norm_draws(root: np.ndarray, draws: int, seed: int, shift=None) -> np.ndarray:
    """``draws`` realisations of ||root Z + shift||_inf.

    Block k of ``MC_BLOCK`` draws always comes from substream (seed, k).
    """
    d = root.shape[0]
    out = np.empty(draws)
    for k, start in enumerate(range(0, draws, MC_BLOCK)):
        m = min(MC_BLOCK, draws - start)
        z = substream(seed, k).standard_normal((m, d))
        g = z @ root
        if shift is not None:
            g += shift
        out[start : start + m] = np.abs(g).max(axis=1)
    return out


def mc_sup_quantile(corr, alpha: float, draws: int, seed: int) -> float:
    """Monte Carlo (1 - alpha)-quantile of ||corr^{1/2} Z||_inf.

    Returns the ceil((1 - alpha) B)-th smallest of B simulated sup-norms.
    """
    _check_level(alpha)
    if draws < 100:
        raise DomainError(f"need at least 100 draws, got {draws}")
    corr = np.atleast_2d(np.asarray(corr, dtype=float))
    _check_correlation(corr)
    root = psd_sqrt(corr, tol=1e-8).root
    sups = sup_norm_draws(root, draws, seed)
    k = order_stat_index(1.0 - alpha, draws)
    return float(np.partition(sups, k - 1)[k - 1])


def bootstrap_cv(corr_tilde, alpha: float, draws: int, seed: int) -> float:
    """Bootstrap critical value: the Gaussian-max quantile at the estimated correlation."""
    corr_tilde = np.atleast_2d(np.asarray(corr_tilde, dtype=float))
    _check_correlation(corr_tilde)
    return mc_sup_quantile(corr_tilde, alpha, draws, seed)
