"""Generalized Marcum functions Q_mu(x, y) and P_mu(x, y), their bounds, and
bounds for the incomplete gamma functions."""

from ._marcum import (
    ConvergenceError,
    DomainError,
    InvalidRegionError,
    NoInflectionError,
    ToleranceError,
    bessel_i_scaled,
    bessel_i_scaled_log,
    bessel_ratio,
    bessel_ratio_bounds,
    c_coefficient,
    central_bound,
    d2q_dx2_classify,
    d2q_dy2_classify,
    f_kernel,
    find_inflection,
    incgamma,
    is_q_positive_guaranteed,
    lower_gamma,
    marcum_p,
    marcum_q,
    oracle_pq,
    p_bound_better,
    p_bound_sequence,
    p_bounds_gamma_series,
    q_bound,
    q_by_poisson_mixture,
    ratio_p_cf_upper,
    ratio_p_convergent,
    table,
    upper_gamma,
    verify,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "InvalidRegionError",
    "NoInflectionError",
    "ToleranceError",
    "bessel_i_scaled",
    "bessel_i_scaled_log",
    "bessel_ratio",
    "bessel_ratio_bounds",
    "c_coefficient",
    "central_bound",
    "d2q_dx2_classify",
    "d2q_dy2_classify",
    "f_kernel",
    "find_inflection",
    "incgamma",
    "is_q_positive_guaranteed",
    "lower_gamma",
    "marcum_p",
    "marcum_q",
    "oracle_pq",
    "p_bound_better",
    "p_bound_sequence",
    "p_bounds_gamma_series",
    "q_bound",
    "q_by_poisson_mixture",
    "ratio_p_cf_upper",
    "ratio_p_convergent",
    "table",
    "upper_gamma",
    "verify",
]
