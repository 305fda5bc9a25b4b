"""Sparse reward learning from pairwise comparisons.

Random utility models with logistic (btl) or Gaussian (tm) noise, penalized
estimators over an l2 ball, certified curvature and information bounds, and
deterministic experiment runners.
"""

from ._kernels import backend_name
from .data import (
    IndexSet,
    PreferenceDataset,
    check_incoherence,
    check_submatrix_nonsingularity,
    refute_restricted_eigenvalue,
)
from .dataio import read_dataset, write_dataset
from .diagnostics import KlReport, pairwise_kl, verify_kl_bound
from .errors import CapacityError, DataFormatError
from .estimators import (
    EstimateReport,
    EstimatorConfig,
    accuracy,
    beta_schedule,
    empirical_error,
    fit_l0,
    fit_l1,
    fit_ml,
    predict,
    predict_labels,
    prox_l1_ball,
    soft_threshold,
)
from .experiments import (
    DiagnoseReport,
    ExperimentSpec,
    ResultRow,
    RunResult,
    beta_contour_spec,
    contour_summary,
    emit_plots,
    frozen_features_spec,
    rate_curve_spec,
    read_rows,
    run_beta_contour,
    run_diagnose,
    run_frozen_features,
    run_rate_curve,
    run_sparsity_curve,
    run_trial,
    sparsity_curve_spec,
    write_rows,
)
from .loss import (
    nll,
    nll_gradient,
    nll_value_grad,
    restrict,
    score_bound_check,
    strong_convexity_certificate,
)
from .model import (
    ModelConstants,
    RewardParam,
    compute_gamma,
    compute_omega,
    compute_zeta,
    get_link,
    sample_preference,
    win_probability,
)
from .synthetic import SyntheticSpec, derive_trial_seed, gen_dataset, gen_theta_star

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DataFormatError",
    "DiagnoseReport",
    "EstimateReport",
    "EstimatorConfig",
    "ExperimentSpec",
    "IndexSet",
    "KlReport",
    "ModelConstants",
    "PreferenceDataset",
    "ResultRow",
    "RewardParam",
    "RunResult",
    "SyntheticSpec",
    "accuracy",
    "backend_name",
    "beta_contour_spec",
    "beta_schedule",
    "check_incoherence",
    "check_submatrix_nonsingularity",
    "compute_gamma",
    "compute_omega",
    "compute_zeta",
    "contour_summary",
    "derive_trial_seed",
    "emit_plots",
    "empirical_error",
    "fit_l0",
    "fit_l1",
    "fit_ml",
    "frozen_features_spec",
    "gen_dataset",
    "gen_theta_star",
    "get_link",
    "nll",
    "nll_gradient",
    "nll_value_grad",
    "pairwise_kl",
    "predict",
    "predict_labels",
    "prox_l1_ball",
    "rate_curve_spec",
    "read_dataset",
    "read_rows",
    "refute_restricted_eigenvalue",
    "restrict",
    "run_beta_contour",
    "run_diagnose",
    "run_frozen_features",
    "run_rate_curve",
    "run_sparsity_curve",
    "run_trial",
    "score_bound_check",
    "soft_threshold",
    "sparsity_curve_spec",
    "strong_convexity_certificate",
    "verify_kl_bound",
    "win_probability",
    "write_dataset",
    "write_rows",
    "__version__",
]
