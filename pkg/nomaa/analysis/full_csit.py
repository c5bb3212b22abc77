# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Closed forms of the full-CSIT case: a user transmits at its instantaneous capacity when it reaches the minimum SINR
gamma and stays silent otherwise.

Average data rates are returned in bits/s/Hz. Internally every expression is built in nats from three kernels
(`alpha`, `log_exponential_tail` and `shifted_e1_transform`) and converted once at the end.
Sums over (i, j) run over the two orderings (lambda_1, lambda_2) and (lambda_2, lambda_1): lambda_i is the rate
attached to the weak variable x_A and lambda_j the one attached to x_B.
"""
import logging
import math

from ._utils import is_equal_power, nats_to_bits, resolve_extra_config
from . import supported
from .channel import ChannelDraw
from .exceptions import ConfigurationError
from .kernels import EULER_GAMMA, alpha, eval_policy, log_exponential_tail, shifted_e1_transform
from .no_csit import m_gamma, phi_noma_weak, phi_oma_weak, psi
from .reports import AsymptoteReport, RateReport, StrategyDecision
from .supported import Mode, Provenance, Strategy, Target, parse_enum

logger = logging.getLogger(__name__)

_LN2 = math.log(2.0)


def rate_noma_weak(s, extra_config=None):
    """
    E[R_A] in NOMA: the weak user is active when x_A >= gamma / rho and is decoded interference-free.
    """
    return nats_to_bits(s.lambda_sum * alpha(s.gamma, s.lambda_sum, s.rho, eval_policy(extra_config)))


def j_b_inactive(s, extra_config=None):
    """
    Average rate of the strong user in NOMA over the draws where the weak user is inactive.
    """
    policy = eval_policy(extra_config)
    k = s.noma_threshold
    l1, l2 = s.lambda_1, s.lambda_2
    nats = l2 * -math.expm1(-l1 * k) * alpha(s.gamma, l2, s.rho, policy)
    nats += l1 * -math.expm1(-l2 * k) * alpha(s.gamma, l1, s.rho, policy)
    return nats_to_bits(nats)


def _beta(s, li, lj, policy):
    # Strong-user rate log(1 + rho x_B / (1 + rho x_A)) over x_A >= k, x_B >= k + gamma x_A.
    k = s.noma_threshold
    c = li + lj * s.gamma
    log_part = li / c * math.log1p(s.gamma) * math.exp(-lj * k - c * k)
    slope = lj * (1.0 + s.gamma)
    e1_part = li * shifted_e1_transform(lj / s.rho, li - lj, slope, slope / s.rho, k, policy)
    return log_part + e1_part


def j_b_active(s, extra_config=None):
    """
    Average rate of the strong user in NOMA over the draws where both users are active.
    Equal powers are handled by the first-order expansion inside `shifted_e1_transform`.
    """
    policy = eval_policy(extra_config)
    return nats_to_bits(sum(_beta(s, li, lj, policy) for li, lj in s.pairs()))


def rate_noma_strong(s, extra_config=None):
    """
    E[R_B] in NOMA = J_{B/A inactive} + J_{B/A active}.
    """
    policy = eval_policy(extra_config)
    return j_b_inactive(s, policy) + j_b_active(s, policy)


def rate_oma(s, extra_config=None):
    """
    Average rates of OMA: each user owns half of the slots with twice the power and needs the SNR gamma_tilde.

    Returns:
        (weak, strong) in bits/s/Hz
    """
    policy = eval_policy(extra_config)
    rho_oma = 2.0 * s.rho
    gt = s.gamma_tilde
    l1, l2, lsum = s.lambda_1, s.lambda_2, s.lambda_sum
    joint = lsum * alpha(gt, lsum, rho_oma, policy)
    weak = 0.5 * joint
    strong = 0.5 * (l1 * alpha(gt, l1, rho_oma, policy) + l2 * alpha(gt, l2, rho_oma, policy) - joint)
    return nats_to_bits(weak), nats_to_bits(max(strong, 0.0))


def decide_noma_a(s, draw):
    """
    The per-draw transmission mode of the adaptive full-CSIT strategy.

    NOMA is kept whenever both users are active with it; otherwise a lone strong user transmits interference-free,
    or both users switch to OMA when their OMA slots can carry the minimum rate.

    Args:
        s: A `Scenario`
        draw: A two-user `ChannelDraw` (or an (x_A, x_B) pair)

    Returns:
        A `StrategyDecision`
    """
    if not isinstance(draw, ChannelDraw):
        draw = ChannelDraw(draw)
    if len(draw.x) != 2:
        raise ConfigurationError("decide_noma_a needs a two-user draw, got {} users.".format(len(draw.x)))
    xa, xb = draw.xa, draw.xb
    k = s.noma_threshold
    kt = s.oma_threshold
    if xa >= k and xb >= k * (1.0 + s.rho * xa):
        mode = Mode.noma_both
    elif xa < k:
        mode = Mode.strong_only_free if xb >= k else Mode.none
    elif xa >= kt:
        mode = Mode.oma_both if xb >= kt else Mode.weak_only_free
    elif xb >= k:
        mode = Mode.strong_only_fallback
    else:
        mode = Mode.none
    return StrategyDecision(mode=mode)


def _chi(s, li, lj, policy):
    k = s.noma_threshold
    c = li + lj * s.gamma
    decay = math.exp(-lj * k)
    noma_part = li * decay * alpha(s.gamma, c, s.rho, policy)
    rho_oma = 2.0 * s.rho
    oma_joint = alpha(s.gamma_tilde, s.lambda_sum, rho_oma, policy)
    oma_part = 0.5 * li * (oma_joint - decay * alpha(s.gamma_tilde, c, rho_oma, policy))
    return noma_part + oma_part


def rate_noma_a_weak(s, extra_config=None):
    """
    E[R^_A]: the weak user is active in NOMA (rate log2(1 + rho x_A)) or in OMA (rate log2(1 + 2 rho x_A) / 2).
    """
    policy = eval_policy(extra_config)
    return nats_to_bits(sum(_chi(s, li, lj, policy) for li, lj in s.pairs()))


def _strip_tail(s, t, policy):
    # int_{t/rho}^inf dx_A int_{x_A}^{k + gamma x_A} log(1 + rho x_B) f dx_B
    k = s.noma_threshold
    a0 = t / s.rho
    total = s.lambda_sum * alpha(t, s.lambda_sum, s.rho, policy)
    for li, lj in s.pairs():
        c = li + lj * s.gamma
        b_term = li * shifted_e1_transform(lj / s.rho, li, lj, lj / s.rho, a0, policy)
        c_term = li * math.exp(-lj * k) * log_exponential_tail(c, 1.0 + s.gamma, s.gamma * s.rho, a0, policy)
        d_term = li * shifted_e1_transform(lj / s.rho, li, lj * s.gamma, lj * (1.0 + s.gamma) / s.rho, a0, policy)
        total += b_term - c_term - d_term
    return total


def jhat_b_inactive(s, extra_config=None):
    """
    Average rate of the strong user in the adaptive strategy when it transmits alone because NOMA failed
    and the weak user cannot reach its OMA threshold (gamma / rho <= x_A < gamma_tilde / (2 rho)).
    """
    policy = eval_policy(extra_config)
    return nats_to_bits(_strip_tail(s, s.gamma, policy) - _strip_tail(s, 0.5 * s.gamma_tilde, policy))


def _omega(s, li, lj, policy):
    k = s.noma_threshold
    kt = s.oma_threshold
    rho_oma = 2.0 * s.rho
    c = li + lj * s.gamma
    a_term = li * alpha(s.gamma_tilde, s.lambda_sum, rho_oma, policy)
    b_term = li * shifted_e1_transform(lj / rho_oma, li, lj, lj / rho_oma, kt, policy)
    c_term = li * math.exp(-lj * k) * log_exponential_tail(c, 1.0 + 2.0 * s.gamma, rho_oma * s.gamma, kt, policy)
    d_term = li * shifted_e1_transform(lj / rho_oma, li, lj * s.gamma, lj * (1.0 + 2.0 * s.gamma) / rho_oma, kt, policy)
    return a_term + b_term - c_term - d_term


def jhat_b_active(s, extra_config=None):
    """
    Average rate of the strong user in the adaptive strategy when both users fall back to OMA.
    """
    policy = eval_policy(extra_config)
    return nats_to_bits(0.5 * sum(_omega(s, li, lj, policy) for li, lj in s.pairs()))


def rate_noma_a(s, extra_config=None):
    """
    Average rates of the adaptive full-CSIT strategy.

    Returns:
        (weak, strong) in bits/s/Hz, the strong one being E[R_B] + the two adaptive corrections
    """
    policy = eval_policy(extra_config)
    strong = rate_noma_strong(s, policy) + jhat_b_inactive(s, policy) + jhat_b_active(s, policy)
    return max(rate_noma_a_weak(s, policy), 0.0), max(strong, 0.0)


def rate_report(s, strategy, extra_config=None):
    """
    `RateReport` of a two-user strategy evaluated in closed form.
    `extra_config` may set the E1 kernel and equal-power keys of `nomaa.analysis.supported`.
    """
    strategy = parse_enum(Strategy, strategy, "strategy")
    policy = eval_policy(extra_config)
    if strategy == Strategy.noma:
        weak, strong = rate_noma_weak(s, policy), rate_noma_strong(s, policy)
    elif strategy == Strategy.oma:
        weak, strong = rate_oma(s, policy)
    else:
        weak, strong = rate_noma_a(s, policy)
    return RateReport(weak, strong, strategy, Provenance.closed_form)


def activity_probability(s, strategy):
    """
    Probability that both users are active.

    NOMA and OMA are limited by the weak user. The adaptive strategy adds the OMA fallback region
    {x_A >= gamma_tilde / (2 rho), x_B < (gamma / rho)(1 + rho x_A)} to the NOMA one.
    """
    strategy = parse_enum(Strategy, strategy, "strategy")
    if strategy == Strategy.noma:
        return phi_noma_weak(s)
    if strategy == Strategy.oma:
        return phi_oma_weak(s)
    kt = s.oma_threshold
    fallback = phi_oma_weak(s) - psi(s, 1, 2, kt) - psi(s, 2, 1, kt)
    return min(phi_noma_weak(s) + max(fallback, 0.0), 1.0)


def _sum_log_c(s):
    # sum_{i,j} lambda_i / c_ij log(c_ij)
    return sum(li / (li + lj * s.gamma) * math.log(li + lj * s.gamma) for li, lj in s.pairs())


def _noma_strong_asymptote(s, policy):
    # Limit of the strong NOMA rate:
    # m(gamma) log(1 + gamma) + sum lambda_i / (lambda_i - lambda_j) log(c_ij / (lambda_j (1 + gamma)))
    total = m_gamma(s) * math.log1p(s.gamma)
    equal = is_equal_power(s.lambda_1, s.lambda_2, policy.equal_power_tol)
    for li, lj in s.pairs():
        slope = lj * (1.0 + s.gamma)
        if equal:
            total += li / slope
        else:
            total += li / (li - lj) * math.log1p((li - lj) / slope)
    return total


def _asymptote_nats(s, strategy, target, policy):
    ln_l = math.log(s.lambda_sum)
    m = m_gamma(s)
    if target == Target.sum:
        weak = _asymptote_nats(s, strategy, Target.weak, policy)
        strong = _asymptote_nats(s, strategy, Target.strong, policy)
        return weak[0] + strong[0], weak[1] + strong[1]
    if strategy == Strategy.noma:
        if target == Target.weak:
            return 1.0, -ln_l - EULER_GAMMA
        return 0.0, _noma_strong_asymptote(s, policy)
    if strategy == Strategy.oma:
        if target == Target.weak:
            return 0.5, 0.5 * (_LN2 - ln_l - EULER_GAMMA)
        return 0.5, 0.5 * (_LN2 + ln_l - math.log(s.lambda_1) - math.log(s.lambda_2) - EULER_GAMMA)
    if target == Target.weak:
        intercept = -0.5 * (1.0 + m) * EULER_GAMMA + 0.5 * (1.0 - m) * _LN2 - 0.5 * ln_l - 0.5 * _sum_log_c(s)
        return 0.5 * (1.0 + m), intercept
    c12 = s.lambda_1 + s.lambda_2 * s.gamma
    c21 = s.lambda_2 + s.lambda_1 * s.gamma
    oma_fallback = 0.5 * (
        (1.0 - m) * (_LN2 - EULER_GAMMA)
        + ln_l
        + (2.0 - m) * math.log(s.gamma)
        + _sum_log_c(s)
        - math.log(c12)
        - math.log(c21)
    )
    return 0.5 * (1.0 - m), _noma_strong_asymptote(s, policy) + oma_fallback


def asymptotics(s, strategy, user, extra_config=None):
    """
    High-SNR behaviour rate ~ slope ln(rho) + intercept of a rate, from the analytic expansions.

    Weak-user slopes are 1, 1/2 and (1 + m(gamma)) / 2 (NOMA, OMA, adaptive), strong-user slopes 0, 1/2 and
    (1 - m(gamma)) / 2, so every sum rate gains one bit per doubling of rho. The strong NOMA rate has a finite asymptote.

    Args:
        s: A `Scenario` (its rho is ignored)
        strategy: A `Strategy`
        user: A `Target`
        extra_config: Optional dictionary, only `EQUAL_POWER_TOL` is read

    Returns:
        An `AsymptoteReport` in bits
    """
    strategy = parse_enum(Strategy, strategy, "strategy")
    target = parse_enum(Target, user, "user")
    slope, intercept = _asymptote_nats(s, strategy, target, eval_policy(extra_config))
    return AsymptoteReport(nats_to_bits(slope), nats_to_bits(intercept), strategy, target)


def rate_of(s, strategy, target, extra_config=None):
    """
    Closed-form average rate (bits/s/Hz) of one user, or of the sum, under a two-user strategy.
    """
    report = rate_report(s, strategy, extra_config)
    target = parse_enum(Target, target, "user")
    return {Target.weak: report.r_weak, Target.strong: report.r_strong, Target.sum: report.r_sum}[target]


def fit_asymptote(s, strategy, user, extra_config=None):
    """
    Slope and intercept fitted on the closed form at the two SNR values of `ASYMPTOTE_FIT_RHO`.
    """
    strategy = parse_enum(Strategy, strategy, "strategy")
    target = parse_enum(Target, user, "user")
    extra_config = resolve_extra_config(extra_config)
    rho_1, rho_2 = extra_config[supported.ASYMPTOTE_FIT_RHO]
    policy = eval_policy(extra_config)
    r_1 = rate_of(s.with_rho(rho_1), strategy, target, policy)
    r_2 = rate_of(s.with_rho(rho_2), strategy, target, policy)
    slope = (r_2 - r_1) / math.log(rho_2 / rho_1)
    logger.debug("fitted %s/%s slope %g on [%g, %g]", strategy.name, target.name, slope, rho_1, rho_2)
    return AsymptoteReport(slope, r_2 - slope * math.log(rho_2), strategy, target, fitted=True)
