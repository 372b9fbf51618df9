"""scikit-learn style wrappers around the max-tests.

The tests are "fit" on a sample and expose the decision through fitted
attributes, so they can sit next to other estimators (cloning, grid of
``set_params``, pipelines ending in a test).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .maxtests import run_mean_test, run_winsor_boot_test, run_winsor_test
from .model import TuningConfig
from .winsor import epsilon_n, epsilon_prime_n, robust_covariance, winsorized_mean_stat


def _check_sample(X) -> np.ndarray:
    return check_array(X, dtype=np.float64, ensure_min_samples=2, ensure_all_finite=True)


class _MaxTest(BaseEstimator):
    _runner = None

    def _config(self) -> TuningConfig:
        return TuningConfig(alpha=self.alpha)

    def fit(self, X, y=None):
        X = _check_sample(X)
        self.n_features_in_ = X.shape[1]
        report = type(self)._runner(X, self._config())
        self.report_ = report
        self.statistic_ = report.coord_stats
        self.sup_norm_ = report.sup_norm
        self.critical_value_ = report.critical_value
        self.reject_ = report.reject
        self.degenerate_coords_ = report.degenerate_coords
        return self

    def test(self, X) -> bool:
        """Fit on ``X`` and return the rejection decision."""
        return self.fit(X).reject_

    def summary(self) -> dict:
        check_is_fitted(self, "report_")
        return self.report_.to_dict()


class MeanMaxTest(_MaxTest):
    """Max-test on self-normalized arithmetic means with the diagonal critical value."""

    _runner = staticmethod(run_mean_test)

    def __init__(self, alpha=0.05):
        self.alpha = alpha


class WinsorMaxTest(_MaxTest):
    """Max-test on winsorized means with the diagonal critical value."""

    _runner = staticmethod(run_winsor_test)

    def __init__(self, alpha=0.05, c=1.1, c_cov=None, eta_bar=0.0):
        self.alpha = alpha
        self.c = c
        self.c_cov = c_cov
        self.eta_bar = eta_bar

    def _config(self):
        return TuningConfig(alpha=self.alpha, c=self.c, c_cov=self.c_cov, eta_bar=self.eta_bar)


class WinsorBootMaxTest(WinsorMaxTest):
    """Winsorized max-test calibrated by the Gaussian bootstrap at the robust correlation."""

    _runner = staticmethod(run_winsor_boot_test)

    def __init__(self, alpha=0.05, c=1.1, c_cov=None, eta_bar=0.0, boot_draws=2000, random_state=0):
        super().__init__(alpha=alpha, c=c, c_cov=c_cov, eta_bar=eta_bar)
        self.boot_draws = boot_draws
        self.random_state = random_state

    def _config(self):
        return TuningConfig(
            alpha=self.alpha,
            c=self.c,
            c_cov=self.c_cov,
            eta_bar=self.eta_bar,
            boot_draws=self.boot_draws,
            seed=self.random_state,
        )


class WinsorScaler(TransformerMixin, BaseEstimator):
    """Learn per-column winsorization points and clamp new data to them.

    With ``eps=None`` the fraction is chosen from (c, eta_bar, n, d) as for
    the winsorized test. Also stores the robust scale ``scale_`` and robust
    correlation ``correlation_`` of the training sample.
    """

    def __init__(self, eps=None, c=1.1, c_cov=None, eta_bar=0.0):
        self.eps = eps
        self.c = c
        self.c_cov = c_cov
        self.eta_bar = eta_bar

    def fit(self, X, y=None):
        X = _check_sample(X)
        n, d = X.shape
        eps = self.eps if self.eps is not None else epsilon_n(self.c, self.eta_bar, n, d)
        c_cov = self.c if self.c_cov is None else self.c_cov
        t_vec, pts = winsorized_mean_stat(X, eps)
        mom = robust_covariance(X, epsilon_prime_n(c_cov, self.eta_bar, n, d))
        self.n_features_in_ = d
        self.eps_ = eps
        self.lower_ = pts.lower
        self.upper_ = pts.upper
        self.location_ = t_vec / np.sqrt(n)
        self.scale_ = mom.sigma_tilde
        self.covariance_ = mom.cov_tilde
        self.correlation_ = mom.corr_tilde
        return self

    def transform(self, X):
        check_is_fitted(self, "lower_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return np.clip(X, self.lower_, self.upper_)
