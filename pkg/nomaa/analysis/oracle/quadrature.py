# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Adaptive quadrature oracle for the closed forms.

Every closed form is registered next to the integral defining it over the ordered pair (x_A, x_B) with joint density
lambda_1 lambda_2 (e^-(lambda_1 a + lambda_2 b) + e^-(lambda_2 a + lambda_1 b)) on 0 <= a <= b.
The integrals are computed with nested `scipy.integrate.quad` calls and never use the E1 kernel of nomaa.
Infinite ranges are cut 40 e-folds of the slowest exponential past their lower end. Ranges carry breakpoints
at 1 / rho, 100 / rho, 10^4 / rho, ... past their lower end, where log(1 + rho x) bends.
"""
import math
import warnings

from scipy.integrate import IntegrationWarning, quad
from scipy.special import exp1

from .. import full_csit, no_csit, supported
from .._utils import resolve_extra_config
from ..exceptions import MissingFormula

_EFOLDS = 40.0
_BREAKPOINT_RATIO = 100.0
_LN2 = math.log(2.0)

_formula_pool = {}


def register_formula(formula_id, closed, integral):
    """
    Registers a (closed form, defining integral) pair.

    Args:
        formula_id: The identifier used by `quad_verify`
        closed: A function `(Scenario, extra_config) -> float`
        integral: A function `(Scenario, options) -> float`, `options` being the (epsrel, limit) pair
    """
    _formula_pool[formula_id] = (closed, integral)


def formulas():
    """
    The identifiers of every registered formula, sorted.
    """
    return sorted(_formula_pool)


def _breakpoints(lo, hi, scale):
    points = []
    point = lo + scale
    while point < hi:
        points.append(point)
        point = lo + (point - lo) * _BREAKPOINT_RATIO
    return points


def _quad(fun, lo, hi, options, scale=None):
    if hi <= lo:
        return 0.0
    epsrel, limit = options
    points = None if scale is None else _breakpoints(lo, hi, scale)
    if points:
        limit = max(limit, 2 * len(points) + 2)
        return quad(fun, lo, hi, epsabs=0.0, epsrel=epsrel, limit=limit, points=points)[0]
    return quad(fun, lo, hi, epsabs=0.0, epsrel=epsrel, limit=limit)[0]


def _joint(s):
    l1, l2 = s.lambda_1, s.lambda_2

    def pdf(a, b):
        return l1 * l2 * (math.exp(-(l1 * a + l2 * b)) + math.exp(-(l2 * a + l1 * b)))

    return pdf


def _tail(s, lo):
    return lo + _EFOLDS / min(s.lambda_1, s.lambda_2)


def _wedge(s, weight, a_lo, a_hi, b_lo, b_hi, options):
    """
    int_{a_lo}^{a_hi} da int_{b_lo(a)}^{b_hi(a)} weight(a, b) f(a, b) db, b_hi(a) = None meaning infinity.
    """
    pdf = _joint(s)
    scale = 1.0 / s.rho
    if a_hi is None:
        a_hi = a_lo + _EFOLDS / s.lambda_sum

    def inner(a):
        lo = b_lo(a)
        hi = _tail(s, lo) if b_hi is None else b_hi(a)
        return _quad(lambda b: weight(a, b) * pdf(a, b), lo, hi, options, scale)

    return _quad(inner, a_lo, a_hi, options, scale)


def _weak_marginal(s, weight, lo, options):
    lsum = s.lambda_sum
    return _quad(lambda a: weight(a) * lsum * math.exp(-lsum * a), lo, lo + _EFOLDS / lsum, options, 1.0 / s.rho)


def _strong_marginal(s, weight, lo, options):
    l1, l2, lsum = s.lambda_1, s.lambda_2, s.lambda_sum

    def pdf(b):
        return l1 * math.exp(-l1 * b) + l2 * math.exp(-l2 * b) - lsum * math.exp(-lsum * b)

    return _quad(lambda b: weight(b) * pdf(b), lo, _tail(s, lo), options, 1.0 / s.rho)


def _one(*args):
    return 1.0


def _log2_capacity(power_rho):
    return lambda x: math.log1p(power_rho * x) / _LN2


# Defining integrals. k = gamma / rho, kt = gamma_tilde / (2 rho).


def _noma_region(s):
    k, g = s.noma_threshold, s.gamma
    return k, lambda a: k + g * a


def _phi_noma_strong(s, options):
    _, edge = _noma_region(s)
    return _wedge(s, _one, 0.0, None, edge, None, options)


def _phi_noma_weak(s, options):
    k, edge = _noma_region(s)
    return _wedge(s, _one, k, None, edge, None, options)


def _phi_oma_weak(s, options):
    return _weak_marginal(s, _one, s.oma_threshold, options)


def _phi_oma_strong(s, options):
    return _strong_marginal(s, _one, s.oma_threshold, options)


def _rate_noma_weak(s, options):
    return _weak_marginal(s, _log2_capacity(s.rho), s.noma_threshold, options)


def _j_b_inactive(s, options):
    k = s.noma_threshold
    capacity = _log2_capacity(s.rho)
    return _wedge(s, lambda a, b: capacity(b), 0.0, k, lambda a: k, None, options)


def _j_b_active(s, options):
    k, edge = _noma_region(s)
    rho = s.rho

    def weight(a, b):
        return math.log1p(rho * b / (1.0 + rho * a)) / _LN2

    return _wedge(s, weight, k, None, edge, None, options)


def _rate_noma_strong(s, options):
    return _j_b_inactive(s, options) + _j_b_active(s, options)


def _rate_oma_weak(s, options):
    return 0.5 * _weak_marginal(s, _log2_capacity(2.0 * s.rho), s.oma_threshold, options)


def _rate_oma_strong(s, options):
    return 0.5 * _strong_marginal(s, _log2_capacity(2.0 * s.rho), s.oma_threshold, options)


def _fallback_strip(s, weight, a_lo, a_hi, options):
    # a in [a_lo, a_hi), x_B between x_A and the NOMA edge: NOMA fails with an active weak user.
    _, edge = _noma_region(s)
    return _wedge(s, weight, a_lo, a_hi, lambda a: a, edge, options)


def _rate_noma_a_weak(s, options):
    k, edge = _noma_region(s)
    noma_capacity = _log2_capacity(s.rho)
    oma_capacity = _log2_capacity(2.0 * s.rho)
    noma = _wedge(s, lambda a, b: noma_capacity(a), k, None, edge, None, options)
    oma = _fallback_strip(s, lambda a, b: 0.5 * oma_capacity(a), s.oma_threshold, None, options)
    return noma + oma


def _jhat_b_inactive(s, options):
    capacity = _log2_capacity(s.rho)
    return _fallback_strip(s, lambda a, b: capacity(b), s.noma_threshold, s.oma_threshold, options)


def _jhat_b_active(s, options):
    capacity = _log2_capacity(2.0 * s.rho)
    return _fallback_strip(s, lambda a, b: 0.5 * capacity(b), s.oma_threshold, None, options)


def _rate_noma_a_strong(s, options):
    return _rate_noma_strong(s, options) + _jhat_b_inactive(s, options) + _jhat_b_active(s, options)


def _activity_noma_a(s, options):
    return _phi_noma_weak(s, options) + _fallback_strip(s, _one, s.oma_threshold, None, options)


def quad_verify(s, formula_id, extra_config=None):
    """
    Evaluates a registered closed form and its defining integral.

    Args:
        s: A `Scenario`
        formula_id: One of `formulas()`
        extra_config: Optional dictionary overriding QUAD_EPSREL and QUAD_LIMIT, also handed to the closed form

    Returns:
        The tuple (closed, integral, rel_err) with rel_err = |closed - integral| / max(|integral|, 1e-300)

    Raises:
        MissingFormula: If `formula_id` is not registered
    """
    if formula_id not in _formula_pool:
        raise MissingFormula("Formula '{}' is not registered. Registered formulas: {}.".format(formula_id, formulas()))
    extra_config = resolve_extra_config(extra_config)
    options = (extra_config[supported.QUAD_EPSREL], extra_config[supported.QUAD_LIMIT])
    closed, integral = _formula_pool[formula_id]

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        integral_value = float(integral(s, options))
    issues = [w for w in caught if issubclass(w.category, IntegrationWarning)]
    if len(issues) > 0:
        warnings.warn(
            "{} quadrature warning(s) while integrating '{}' at {}: {}".format(len(issues), formula_id, s, issues[0].message),
            IntegrationWarning,
        )
    closed_value = float(closed(s, extra_config))
    rel_err = abs(closed_value - integral_value) / max(abs(integral_value), 1e-300)
    return closed_value, integral_value, rel_err


# Kernel oracles.


def e1_by_quadrature(x, extra_config=None):
    """
    E1(x) as int_0^inf exp(-x e^u) du.
    """
    extra_config = resolve_extra_config(extra_config)
    options = (extra_config[supported.QUAD_EPSREL], extra_config[supported.QUAD_LIMIT])
    upper = max(math.log(2.0 * _EFOLDS / x), 1.0)
    return _quad(lambda u: math.exp(-x * math.exp(u)), 0.0, upper, options)


def alpha_by_quadrature(gamma, lam, rho, extra_config=None):
    """
    int_{gamma/rho}^inf log(1 + rho x) e^(-lambda x) dx, in nats.
    """
    extra_config = resolve_extra_config(extra_config)
    options = (extra_config[supported.QUAD_EPSREL], extra_config[supported.QUAD_LIMIT])
    lo = gamma / rho
    return _quad(lambda x: math.log1p(rho * x) * math.exp(-lam * x), lo, lo + _EFOLDS / lam, options)


def laplace_by_quadrature(p, a, b, s, extra_config=None):
    """
    int_s^inf e^(-p x) E1(a x + b) dx, with E1 taken from scipy.
    """
    extra_config = resolve_extra_config(extra_config)
    options = (extra_config[supported.QUAD_EPSREL], extra_config[supported.QUAD_LIMIT])
    return _quad(lambda x: math.exp(-p * x) * exp1(a * x + b), s, s + _EFOLDS / (p + a), options)


# Registered pairs. Closed forms are looked up at call time.
register_formula("phi_noma_strong", lambda s, extra_config: no_csit.phi_noma_strong(s), _phi_noma_strong)
register_formula("phi_noma_weak", lambda s, extra_config: no_csit.phi_noma_weak(s), _phi_noma_weak)
register_formula("phi_oma_weak", lambda s, extra_config: no_csit.phi_oma_weak(s), _phi_oma_weak)
register_formula("phi_oma_strong", lambda s, extra_config: no_csit.phi_oma_strong(s), _phi_oma_strong)
register_formula("rate_noma_weak", lambda s, extra_config: full_csit.rate_noma_weak(s, extra_config), _rate_noma_weak)
register_formula("j_b_inactive", lambda s, extra_config: full_csit.j_b_inactive(s, extra_config), _j_b_inactive)
register_formula("j_b_active", lambda s, extra_config: full_csit.j_b_active(s, extra_config), _j_b_active)
register_formula("rate_noma_strong", lambda s, extra_config: full_csit.rate_noma_strong(s, extra_config), _rate_noma_strong)
register_formula("rate_oma_weak", lambda s, extra_config: full_csit.rate_oma(s, extra_config)[0], _rate_oma_weak)
register_formula("rate_oma_strong", lambda s, extra_config: full_csit.rate_oma(s, extra_config)[1], _rate_oma_strong)
register_formula("rate_noma_a_weak", lambda s, extra_config: full_csit.rate_noma_a_weak(s, extra_config), _rate_noma_a_weak)
register_formula("jhat_b_inactive", lambda s, extra_config: full_csit.jhat_b_inactive(s, extra_config), _jhat_b_inactive)
register_formula("jhat_b_active", lambda s, extra_config: full_csit.jhat_b_active(s, extra_config), _jhat_b_active)
register_formula("rate_noma_a_strong", lambda s, extra_config: full_csit.rate_noma_a(s, extra_config)[1], _rate_noma_a_strong)
register_formula("activity_noma_a", lambda s, extra_config: full_csit.activity_probability(s, "noma_a"), _activity_noma_a)
