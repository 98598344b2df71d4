"""Information-theoretic generalization bounds built on per-sample mutual information."""

from ._core import (
    __version__,
    analytic_ismi_bound,
    chi_squared_neg_inverse,
    cmi_reference,
    estimate_ismi_bound,
    full_mi_bound,
    gaussian_mi,
    gp_exact_gen,
    ismi_bound_gp,
    ismi_gp,
    knn_mi,
    legendre_dual_inverse,
    mean_exact_gen,
    mean_exact_per_sample_mi,
    mean_ismi_bound,
    mean_monte_carlo_gen,
    pensia_bound,
    run_experiment,
    sub_gaussian_inverse,
    sub_gaussian_ismi,
)

__all__ = [
    "__version__",
    "analytic_ismi_bound",
    "chi_squared_neg_inverse",
    "cmi_reference",
    "estimate_ismi_bound",
    "full_mi_bound",
    "gaussian_mi",
    "gp_exact_gen",
    "ismi_bound_gp",
    "ismi_gp",
    "knn_mi",
    "legendre_dual_inverse",
    "mean_exact_gen",
    "mean_exact_per_sample_mi",
    "mean_ismi_bound",
    "mean_monte_carlo_gen",
    "pensia_bound",
    "run_experiment",
    "sub_gaussian_inverse",
    "sub_gaussian_ismi",
]
