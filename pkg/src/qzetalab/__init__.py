"""q-analogues of the Riemann zeta function and Dirichlet L-functions:
evaluation, certified Euler-Maclaurin bounds, zero tracking in q."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .qcore import (
    DirichletCharacter,
    QParam,
    as_qparam,
    bernoulli,
    gen_bernoulli,
    make_character,
    principal_character,
)
from .qzeta import (
    EvalParams,
    SeriesSpec,
    auto_params,
    crystal_value,
    remainder_bound,
    special_value_neg_int,
    zeta,
    zeta_em,
    zeta_expansion,
)
from .reference import KNOWN_ZEROS, dirichlet_L, digamma, hurwitz_zeta, riemann_zeta
from .zeros import (
    QSchedule,
    crystal_classifier,
    find_complex_zero,
    find_real_zero,
    scan_rectangle,
    track_trajectory,
)
