"""Exact arithmetic of imaginary quadratic class numbers and their sieves."""

from .arithmetic import (
    factor,
    fundamental_discriminant_of,
    is_fundamental_discriminant,
    is_prime,
    kronecker,
    moebius,
    sigma1,
    squarefree_decompose,
)
from .classnumbers import (
    class_number,
    class_number_table,
    hurwitz,
    hurwitz_table,
    hurwitz_table_by_weighted_forms,
    reduced_forms,
    unit_count_half,
)
from .conditions import (
    LocalConditions,
    density_report,
    effective_conditions,
    in_A_sigma,
    in_T_sigma,
    search_discriminants,
    auxiliary_prime_conditions,
    validate,
)
from .elliptic import (
    CurveData,
    derive_invariants,
    frey_condition,
    frey_sets,
    rank_zero_twists,
    reduction_at,
    verify_twist_hypotheses,
)
from .levels import bound_report, gamma0_index, q_sigma, sturm_bound
from .qseries import (
    QSeries,
    ResidualShadowError,
    build_F,
    build_h_sigma,
    gauss_check,
    linear_combination,
    ord_ell,
    quadratic_symbol,
    sieve_inert,
    sieve_ramified,
    sieve_split,
    squared_symbol,
    theta_cube,
    twist,
    u_operator,
    v_operator,
    zagier_series,
)

__version__ = "0.1.0"
