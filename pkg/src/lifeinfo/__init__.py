"""Dynamic mutual information and entropies of bivariate lifetimes.

Past, residual and mixed conditioning events, time-transformed exponential
and copula formulations, the (first, last) order-statistics pair, and a
Monte-Carlo oracle for all of them.
"""

from __future__ import annotations

from .copula_mi import marginal_freeness_check, past_mi_copula, residual_mi_survival_copula
from .copulas import (ClaytonCopula, Copula, IndependenceCopula, SurvivalCopula, clayton_special,
                      independence, lomax_copula)
from .dynamic_entropy import (EntropyBundle, conditional_density, discrete_entropy, entropy_bundle,
                              joint_entropy, marginal_entropy, verify_decomposition, whole_region)
from .dynamic_mi import (BoundReport, blm_constancy_check, dynamic_mi, local_dependence_ratio,
                         mi_routes, mixed_mi, mutual_information_static, past_mi, past_mi_bound,
                         residual_mi, residual_mi_bound, residual_mi_tte, symmetry_transfer_check)
from .errors import *  # noqa: F401,F403
from .lifetime_models import (BivariateLifetimeModel, Support, TTEModel, linear_hazard,
                              make_freund, make_from_copula, make_gumbel_type, make_independent,
                              make_linear_unit_square, make_lomax_tte, make_reflected_triangle,
                              make_truncated_tte, make_tte, make_uniform_triangle, marginal,
                              reflect, weibull_hazard)
from .mc_oracle import McEstimate, mc_mutual_information, sample_conditional
from .order_stats_mi import (MinMaxModel, OrderStatModel, conditional_os_densities, h_n,
                             joint_event_prob, k_n, order_stat_model, os_mi_closed_form,
                             os_mi_closed_form_result, os_mi_direct, os_mi_surface, os_mi_symmetric_curve)
from .quadrature import DEFAULT_SPEC, IntegralResult, QuadratureSpec, integrate_1d, integrate_2d, xlogx
from .regions import REGION_KINDS, ConditioningRegion
from .results import MeasureResult
from .special import bisect_increasing, exp1, upper_gamma0

__version__ = "0.1.0"
