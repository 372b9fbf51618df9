"""Robust max-tests for high-dimensional mean vectors."""

from .classic import ClassicMoments, sn_statistic
from .critical import (
    GumbelConstants,
    PSDRoot,
    bootstrap_cv,
    cv_diag_exact,
    cv_diag_expansion,
    gumbel_constants,
    mc_sup_quantile,
    psd_sqrt,
)
from .dgp import (
    ContaminationPlan,
    CorrelationModel,
    NoiseLaw,
    Scenario,
    build_correlation,
    contaminate,
    draw_sample,
    tail_exchange,
)
from .estimators import MeanMaxTest, WinsorBootMaxTest, WinsorMaxTest, WinsorScaler
from .harness import ExperimentResult, ExperimentSpec, emit_results_csv, load_suite, run_experiment
from .maxtests import (
    PowerScenario,
    gaussian_power_oracle,
    rank_one_power_exact,
    run_mean_test,
    run_winsor_boot_test,
    run_winsor_test,
)
from .model import (
    MomentClass,
    Sample,
    TestReport,
    TuningConfig,
    load_sample_csv,
    validate_sample,
    write_sample_csv,
)
from .rates import RateReport, check_theorem_conditions, rate_report
from .winsor import (
    RobustMoments,
    WinsorPoints,
    epsilon_n,
    epsilon_prime_n,
    pair_differences,
    robust_covariance,
    snw_statistic,
    winsor_points,
    winsorize_scalar,
    winsorized_mean_stat,
)

__version__ = "0.1.0"
