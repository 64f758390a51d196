from .em import ACoeffTable, EvalParams, a_coeffs, auto_params, remainder_bound, rounding_estimate, zeta_em
from .series import (
    EvalOutput,
    SeriesKind,
    SeriesSpec,
    Strategy,
    choose_head,
    dzeta_dq,
    dzeta_ds,
    f_direct,
    value_and_ds,
    zeta,
    zeta_expansion,
)
from .special import (
    L_at_one_via_qgamma,
    crystal_value,
    g_chi_at_one,
    in_crystal_domain,
    q_digamma,
    q_gamma,
    special_value_neg_int,
    tsumura_zeta,
)

__all__ = [
    "ACoeffTable",
    "EvalOutput",
    "EvalParams",
    "L_at_one_via_qgamma",
    "SeriesKind",
    "SeriesSpec",
    "Strategy",
    "a_coeffs",
    "auto_params",
    "choose_head",
    "crystal_value",
    "dzeta_dq",
    "dzeta_ds",
    "f_direct",
    "g_chi_at_one",
    "in_crystal_domain",
    "q_digamma",
    "q_gamma",
    "remainder_bound",
    "rounding_estimate",
    "special_value_neg_int",
    "tsumura_zeta",
    "value_and_ds",
    "zeta",
    "zeta_em",
    "zeta_expansion",
]
