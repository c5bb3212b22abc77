# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Closed forms of the no-CSIT case: users transmit at the fixed rate log2(1 + gamma) and are either decoded or in outage.

In NOMA the strong user is decoded first treating the weak one as noise, so its failure also fails the weak user.
In OMA each user owns one of two slots and transmits with twice the power, so it needs the SNR gamma_tilde = 2 gamma + gamma^2
to carry the same information.
"""
import logging
import math
import warnings

import numpy as np
from scipy.optimize import bisect
from scipy.special import logsumexp

from ._utils import resolve_extra_config
from . import supported
from .exceptions import ConfigurationError, NoCrossoverError
from .reports import StrategyDecision, ThroughputReport
from .supported import Strategy, Target, parse_enum

logger = logging.getLogger(__name__)


def _lambda(s, index):
    if index not in (1, 2):
        raise ConfigurationError("User index must be 1 or 2, got {}.".format(index))
    return s.lambda_1 if index == 1 else s.lambda_2


def psi(s, i, j, t):
    """
    psi_{i,j}(t) = lambda_i e^(-lambda_j gamma / rho) / (lambda_i + lambda_j gamma) e^(-(lambda_i + lambda_j gamma) t).

    Args:
        s: A `Scenario`
        i: Index (1 or 2) of the user whose rate multiplies the weak variable
        j: Index of the other user
        t: Lower limit of the weak variable, >= 0
    """
    li, lj = _lambda(s, i), _lambda(s, j)
    c = li + lj * s.gamma
    return li / c * math.exp(-lj * s.noma_threshold - c * t)


def _log_psi(li, lj, s, t):
    c = li + lj * s.gamma
    return math.log(li / c) - lj * s.noma_threshold - c * t


def m_gamma(s):
    """
    The high-SNR NOMA ceiling m(gamma) = lambda_1 / (lambda_1 + lambda_2 gamma) + lambda_2 / (lambda_2 + lambda_1 gamma).
    It equals 1 at gamma = 1 and decreases with gamma.
    """
    return sum(li / (li + lj * s.gamma) for li, lj in s.pairs())


def phi_noma_strong(s):
    """
    Probability that the strong user is decoded in NOMA: P(x_B >= (gamma / rho)(1 + rho x_A)).
    """
    return psi(s, 1, 2, 0.0) + psi(s, 2, 1, 0.0)


def phi_noma_weak(s):
    """
    Probability that both users are decoded in NOMA (the weak user needs the strong one first).
    """
    k = s.noma_threshold
    return psi(s, 1, 2, k) + psi(s, 2, 1, k)


def phi_oma_weak(s):
    return math.exp(-s.lambda_sum * s.oma_threshold)


def phi_oma_strong(s):
    # 1 - P(x_1 < t) P(x_2 < t), written as a sum of non-negative terms so it keeps its digits for large t.
    t = s.oma_threshold
    return math.exp(-s.lambda_1 * t) - math.exp(-s.lambda_2 * t) * math.expm1(-s.lambda_1 * t)


def throughput(s, strategy):
    """
    Throughput (success probability times log2(1 + gamma)) of both users.

    Args:
        s: A `Scenario`
        strategy: `Strategy.oma`, `Strategy.noma`, or `Strategy.noma_a` (the strategy chosen by `select_no_csit`)

    Returns:
        A `ThroughputReport`
    """
    strategy = parse_enum(Strategy, strategy, "strategy")
    bits = math.log2(1.0 + s.gamma)
    if strategy == Strategy.noma:
        return ThroughputReport(phi_noma_weak(s) * bits, phi_noma_strong(s) * bits, strategy)
    if strategy == Strategy.oma:
        return ThroughputReport(phi_oma_weak(s) * bits, phi_oma_strong(s) * bits, strategy)
    chosen = throughput(s, select_no_csit(s).strategy)
    return ThroughputReport(chosen.t_weak, chosen.t_strong, Strategy.noma_a)


def ga_ratio(s):
    """
    g_A(rho) = phi_{A,N} / phi_{A,O} in closed form. Decreasing in rho towards m(gamma).
    """
    gamma_sq = s.gamma * s.gamma
    exponents = [(li - lj) * gamma_sq / (2.0 * s.rho) for li, lj in s.pairs()]
    weights = [li / (li + lj * s.gamma) for li, lj in s.pairs()]
    with np.errstate(over="ignore"):
        return float(np.exp(logsumexp(exponents, b=weights)))


def _log_phi_oma_strong(s):
    t = s.oma_threshold
    if s.lambda_2 * t < 1.0:
        return math.log1p(-math.expm1(-s.lambda_1 * t) * math.expm1(-s.lambda_2 * t))
    return -s.lambda_2 * t + math.log1p(math.exp(-(s.lambda_1 - s.lambda_2) * t) - math.exp(-s.lambda_1 * t))


def log_advantage(s, target):
    """
    log(OMA metric) - log(NOMA metric) for the weak user, the strong user or the sum throughput.
    Non-negative when OMA is at least as good. Evaluated in the log domain so it stays finite for tiny rho.
    """
    target = parse_enum(Target, target, "target")
    k = s.noma_threshold
    log_weak_noma = logsumexp([_log_psi(li, lj, s, k) for li, lj in s.pairs()])
    log_strong_noma = logsumexp([_log_psi(li, lj, s, 0.0) for li, lj in s.pairs()])
    log_weak_oma = -s.lambda_sum * s.oma_threshold
    log_strong_oma = _log_phi_oma_strong(s)
    if target == Target.weak:
        return log_weak_oma - log_weak_noma
    if target == Target.strong:
        return log_strong_oma - log_strong_noma
    return np.logaddexp(log_weak_oma, log_strong_oma) - np.logaddexp(log_weak_noma, log_strong_noma)


def rho_min(s, target, extra_config=None):
    """
    The smallest linear SNR above which the OMA throughput is at least the NOMA throughput.

    A log-spaced scan brackets the crossing, which is then refined by bisection. For the weak user the ratio g_A
    is monotone and there is a single crossing; for the strong user and the sum the largest crossing is returned.

    Args:
        s: A `Scenario` (its rho is ignored)
        target: `Target.weak`, `Target.strong` or `Target.sum`
        extra_config: Optional dictionary overriding the scan settings in `nomaa.analysis.supported`

    Returns:
        rho_min (linear), or 0 when OMA is already at least as good at the lower end of the scan

    Raises:
        NoCrossoverError: If NOMA is still better at the upper end of the scan
    """
    target = parse_enum(Target, target, "target")
    extra_config = resolve_extra_config(extra_config)
    low = extra_config[supported.RHO_MIN_SCAN_LOW]
    high = extra_config[supported.RHO_MIN_SCAN_HIGH]
    rtol = extra_config[supported.RHO_MIN_RTOL]
    grid = np.logspace(math.log10(low), math.log10(high), extra_config[supported.RHO_MIN_SCAN_POINTS])

    if target == Target.weak and s.gamma <= 1.0:
        raise NoCrossoverError("g_A decreases to m(gamma) = 1 at gamma = {}, OMA never overtakes NOMA.".format(s.gamma))

    def advantage(rho):
        return log_advantage(s.with_rho(rho), target)

    values = np.array([advantage(rho) for rho in grid])
    behind = np.flatnonzero(values < 0)
    if len(behind) == 0:
        warnings.warn("OMA already dominates at rho = {:g}; the crossover lies below the scanned range.".format(low))
        return 0.0
    last = behind[-1]
    if last == len(grid) - 1:
        raise NoCrossoverError("NOMA is still better than OMA for the {} user at rho = {:g}.".format(target.name, high))
    if target == Target.weak and len(behind) != last + 1:
        logger.warning("g_A is not monotone on the scan grid for %s", s)
    logger.debug("crossover of %s bracketed in [%g, %g]", target.name, grid[last], grid[last + 1])
    return float(bisect(advantage, grid[last], grid[last + 1], xtol=grid[last] * 1e-12, rtol=rtol))


def select_no_csit(s):
    """
    The adaptive no-CSIT choice between OMA and NOMA: the larger sum throughput wins, ties go to NOMA.
    The choice depends on the large-scale parameters only.
    """
    noma = throughput(s, Strategy.noma)
    oma = throughput(s, Strategy.oma)
    return StrategyDecision(strategy=Strategy.noma if noma.t_sum >= oma.t_sum else Strategy.oma)
