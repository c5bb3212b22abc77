# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
nomaa.analysis evaluates two-user uplink NOMA, OMA and adaptive NOMA in closed form (throughput without CSIT,
average data rate with full CSIT, OMA/NOMA crossover SNR, high-SNR asymptotes) and checks every closed form
against Monte Carlo simulation and adaptive quadrature.
"""


# Register constants used for nomaa extra configs.
from . import supported as nomaa_constants
from ._utils import _Constants

# Add constants in scope.
constants = _Constants(nomaa_constants)

# Add the model and the closed forms in scope.
from .channel import ChannelDraw, KScenario, Scenario, pdf_joint, pdf_strong, pdf_weak, sample  # noqa: F401, E402
from .kernels import EvalPolicy, alpha, exp_integral_e1, laplace_shifted_e1  # noqa: F401, E402
from .no_csit import ga_ratio, m_gamma, phi_noma_strong, phi_noma_weak, phi_oma_strong, phi_oma_weak  # noqa: F401, E402
from .no_csit import psi, rho_min, select_no_csit, throughput  # noqa: F401, E402
from .full_csit import activity_probability, asymptotics, decide_noma_a, fit_asymptote  # noqa: F401, E402
from .full_csit import rate_noma_a, rate_noma_strong, rate_noma_weak, rate_oma, rate_report  # noqa: F401, E402

# Add the supported enums in scope.
from .supported import Metric, Mode, Provenance, Strategy, Target  # noqa: F401, E402

# Add the verifiers.
from .oracle import MixedStrategy, candidate_strategies, mc_rate_full_csit, mc_throughput, quad_verify  # noqa: F401, E402
