# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
The two independent verifiers of the closed forms: Monte Carlo link simulation (also the only engine for K > 2 users)
and adaptive quadrature of the defining integrals.
"""

from .mixed_strategy import MixedStrategy, candidate_strategies, parse_mixed_strategy, sinr_threshold  # noqa: F401
from .monte_carlo import MIN_SAMPLES, mc_rate_full_csit, mc_throughput  # noqa: F401
from .quadrature import (  # noqa: F401
    alpha_by_quadrature,
    e1_by_quadrature,
    formulas,
    laplace_by_quadrature,
    quad_verify,
    register_formula,
)
