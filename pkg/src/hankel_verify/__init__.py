"""Numerical verification of sharp bounds on the third Hankel determinant
``H3(1)`` for starlike functions and for q-starlike functions associated
with the lemniscate of Bernoulli."""

from .bounds import (
    CuboidPoint,
    check_domination,
    domination_sweep,
    h3,
    h3_from_params,
    sharp_bound,
    surrogate_qstar,
    surrogate_star,
)
from .caratheodory import CaratheodoryParams, PCoefficients, lemma_expand, sample_p_function
from .classes import (
    ClassKind,
    ClassTag,
    CoefficientVector,
    coeffs_from_subordination,
    coeffs_qstar_closed_a5,
    coeffs_star_closed,
    extremal_qstar,
    extremal_star,
)
from .optimize import OptimizationReport, verify_sharp_bound
from .series import QParameter, TruncatedSeries

__version__ = "0.1.0"
