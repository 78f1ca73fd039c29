"""frialab: exact and saddle-point statistics for divisors of friable integers.

The library enumerates friable (smooth) integers exactly, solves the one-
and two-variable saddle-point systems attached to the divisor-weighted
Dirichlet series over them, and compares the exact divisor-tail statistic
against its Gaussian and corrected analytic predictions.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    DomainError,
    FrialabError,
    NumericError,
    SolverError,
)
from .friable import (
    GUARD_BAND,
    MAX_N,
    ExactStats,
    Factorization,
    PrimeBasis,
    d_exact,
    d_exact_multi,
    divisor_tail_fraction,
    enumerate_friable,
    primes_up_to,
    psi_exact,
    rho_n,
)
from .alpha import (
    AlphaState,
    dickman_rho,
    ht_asymptotics,
    phi_k,
    phi_tilde_k,
    psi_dickman,
    psi_ht,
    psi_ht_log,
    sigma_ratio,
    solve_alpha,
    varrho,
)
from .fyseries import (
    FySample,
    SuiteReport,
    XiCoeffTable,
    extract_xi_coeffs,
    f_y_eval,
    fejer_identity,
    fejer_kernel,
    fy_partials,
    g_func,
    hessian_f,
    in_region,
    l_func,
    lemma8_suite,
    lfunc_suite,
    partial_f,
    perron_indicator,
    rs_funcs,
    xi_big,
    xi_small,
)
from .beta import (
    BetaState,
    TaylorCoeffs,
    beta_expansion_check,
    beta_ode_path,
    e_func,
    hess_drift,
    rk_poly,
    solve_beta,
    taylor_bj,
    v_range,
)
from .dlaw import (
    ComparisonRow,
    Prop1Result,
    arcsine_law,
    compare,
    deviation_budget,
    gauss_tail,
    predict_prop1,
    predict_thm1,
    predict_thm2,
    prop1_from_curve,
    r_curve,
    suggested_v_max,
    thm1_envelope,
)

__all__ = [name for name in dir() if not name.startswith("_")]
