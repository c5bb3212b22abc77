# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Special functions and auxiliary integrals behind every closed form of nomaa.

The exponential integral E1 is evaluated with its power series below `series_cutoff` and with the
modified Lentz continued fraction above it. Whenever a closed form multiplies e^c by E1(d), it is
evaluated as e^(c - d) * scaled_e1(d) so that neither factor overflows.
All functions here are pure and thread-safe.
"""
import math

import numpy as np

from ._utils import resolve_extra_config
from . import supported
from .exceptions import ConfigurationError, DomainError

EULER_GAMMA = float(np.euler_gamma)
"""Euler's constant."""

_FPMIN = 1e-300


class EvalPolicy:
    """
    Accuracy knobs of the E1 kernel and of the equal-rate limits of the closed forms.
    """

    def __init__(self, series_cutoff=1.0, max_terms=500, rel_tol=1e-12, equal_power_tol=1e-6):
        """
        Args:
            series_cutoff: Argument below which the power series is used
            max_terms: Maximum number of series terms or continued fraction iterations (>= 20)
            rel_tol: Target relative error, in (0, 1e-6]
            equal_power_tol: Relative gap between two exponential rates below which equal-rate limits are used, in [0, 1)
        """
        if not series_cutoff > 0:
            raise ConfigurationError("series_cutoff must be > 0, got {}.".format(series_cutoff))
        if not 0 < rel_tol <= 1e-6:
            raise ConfigurationError("rel_tol must be in (0, 1e-6], got {}.".format(rel_tol))
        if int(max_terms) < 20:
            raise ConfigurationError("max_terms must be >= 20, got {}.".format(max_terms))
        if not 0 <= equal_power_tol < 1:
            raise ConfigurationError("equal_power_tol must be in [0, 1), got {}.".format(equal_power_tol))
        self.series_cutoff = float(series_cutoff)
        self.max_terms = int(max_terms)
        self.rel_tol = float(rel_tol)
        self.equal_power_tol = float(equal_power_tol)

    @classmethod
    def from_extra_config(cls, extra_config):
        extra_config = resolve_extra_config(extra_config)
        return cls(
            series_cutoff=extra_config[supported.SERIES_CUTOFF],
            max_terms=extra_config[supported.MAX_TERMS],
            rel_tol=extra_config[supported.REL_TOL],
            equal_power_tol=extra_config[supported.EQUAL_POWER_TOL],
        )


DEFAULT_POLICY = EvalPolicy()


def eval_policy(extra_config=None):
    """
    The `EvalPolicy` of a dictionary of extra configurations. `None` gives `DEFAULT_POLICY`
    and an `EvalPolicy` is returned unchanged.
    """
    if extra_config is None:
        return DEFAULT_POLICY
    if isinstance(extra_config, EvalPolicy):
        return extra_config
    return EvalPolicy.from_extra_config(extra_config)


def _check_positive(name, x):
    x = np.asarray(x, dtype=np.float64)
    if not np.all(x > 0):
        raise DomainError("{} requires strictly positive arguments, got {}.".format(name, x[~(x > 0)].ravel()[:5]))
    return x


# Scalar paths. Closed forms call the kernel a few dozen times per scenario, so plain floats matter.
def _series_scalar(x, policy):
    # -log(x) - gamma_E - sum_{n>=1} (-x)^n / (n n!)
    head = -math.log(x) - EULER_GAMMA
    total = 0.0
    term = 1.0
    for n in range(1, policy.max_terms + 1):
        term *= -x / n
        delta = term / n
        total += delta
        if abs(delta) < policy.rel_tol * abs(head - total):
            break
    return head - total


def _lentz_scalar(x, policy):
    # Returns e^x E1(x).
    b = x + 1.0
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, policy.max_terms + 1):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < policy.rel_tol:
            break
    return h


def _series_array(x, policy):
    head = -np.log(x) - EULER_GAMMA
    total = np.zeros_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for n in range(1, policy.max_terms + 1):
        term = np.where(active, term * (-x / n), term)
        delta = np.where(active, term / n, 0.0)
        total += delta
        active &= np.abs(delta) >= policy.rel_tol * np.abs(head - total)
        if not active.any():
            break
    return head - total


def _lentz_array(x, policy):
    b = x + 1.0
    c = np.full_like(x, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, policy.max_terms + 1):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = np.where(active, c * d, 1.0)
        h *= delta
        active &= np.abs(delta - 1.0) >= policy.rel_tol
        if not active.any():
            break
    return h


def exp_integral_e1(x, policy=None):
    """
    The exponential integral E1(x) = int_x^inf e^-t / t dt, for x > 0.

    Args:
        x: A positive real or an array of positive reals
        policy: An `EvalPolicy`, `DEFAULT_POLICY` if None

    Returns:
        E1(x), with the shape of `x`
    """
    policy = DEFAULT_POLICY if policy is None else policy
    x = _check_positive("exp_integral_e1", x)
    if x.ndim == 0:
        value = float(x)
        if value < policy.series_cutoff:
            return _series_scalar(value, policy)
        return _lentz_scalar(value, policy) * math.exp(-value)

    out = np.empty_like(x)
    low = x < policy.series_cutoff
    if low.any():
        out[low] = _series_array(x[low], policy)
    if (~low).any():
        out[~low] = _lentz_array(x[~low], policy) * np.exp(-x[~low])
    return out


def scaled_e1(x, policy=None):
    """
    The exponentially scaled exponential integral e^x E1(x), for x > 0.
    It lies strictly between 1/(x+1) and 1/x and never overflows.
    """
    policy = DEFAULT_POLICY if policy is None else policy
    x = _check_positive("scaled_e1", x)
    if x.ndim == 0:
        value = float(x)
        if value < policy.series_cutoff:
            return math.exp(value) * _series_scalar(value, policy)
        return _lentz_scalar(value, policy)

    out = np.empty_like(x)
    low = x < policy.series_cutoff
    if low.any():
        out[low] = np.exp(x[low]) * _series_array(x[low], policy)
    if (~low).any():
        out[~low] = _lentz_array(x[~low], policy)
    return out


def alpha(gamma, lam, rho, policy=None):
    """
    The auxiliary integral alpha(gamma, lambda, rho) = int_{gamma/rho}^inf log(1 + rho x) e^(-lambda x) dx (natural log).

    Args:
        gamma: The SINR threshold (linear), > 0
        lam: The exponential rate, > 0
        rho: The average SNR (linear), > 0
        policy: An `EvalPolicy` for the E1 kernel, `DEFAULT_POLICY` if None

    Returns:
        (e^(-lambda gamma / rho) / lambda) (log(1 + gamma) + e^(lambda (gamma + 1) / rho) E1(lambda (gamma + 1) / rho))
    """
    gamma = _check_positive("alpha", gamma)
    lam = _check_positive("alpha", lam)
    rho = _check_positive("alpha", rho)
    value = np.exp(-lam * gamma / rho) / lam * (np.log1p(gamma) + scaled_e1(lam * (gamma + 1.0) / rho, policy))
    return value[()] if isinstance(value, np.ndarray) else value


def alpha_asymptote(gamma, lam, rho):
    """
    High-SNR linearisation of `alpha`: (log(rho) - log(lambda) - gamma_E) / lambda.
    The threshold `gamma` drops out at first order.
    """
    _check_positive("alpha_asymptote", gamma)
    return (math.log(rho) - math.log(lam) - EULER_GAMMA) / lam


def log_exponential_tail(lam, u, v, a0, policy=None):
    """
    int_{a0}^inf e^(-lambda x) log(u + v x) dx = (e^(-lambda a0) / lambda) (log(u + v a0) + scaled_e1(lambda (a0 + u / v))).

    Args:
        lam: The exponential rate, > 0
        u: Offset of the logarithm, > 0
        v: Slope of the logarithm, > 0
        a0: Lower integration limit, >= 0
    """
    return math.exp(-lam * a0) / lam * (math.log(u + v * a0) + scaled_e1(lam * (a0 + u / v), policy))


def shifted_e1_transform(c, p, a, b, s, policy=None):
    """
    e^c times the Laplace transform int_s^inf e^(-p x) E1(a x + b) dx.

    Unlike `laplace_shifted_e1`, `p` may be zero or negative as long as p + a > 0.
    When |p| / a is below the `equal_power_tol` of `policy` the transform is expanded to first order in p around p = 0.
    """
    if not (a > 0 and b > 0 and s >= 0 and p + a > 0):
        raise DomainError(
            "shifted_e1_transform needs a, b > 0, s >= 0 and p + a > 0; got p={}, a={}, b={}, s={}.".format(p, a, b, s)
        )
    policy = DEFAULT_POLICY if policy is None else policy
    u0 = b + a * s
    s0 = scaled_e1(u0, policy)
    if abs(p) < policy.equal_power_tol * a:
        tail = (1.0 - u0 * s0) / a
        moment = (0.5 * (1.0 + u0 - u0 * u0 * s0) - b * (1.0 - u0 * s0)) / (a * a)
        return math.exp(c - u0) * (tail - p * moment)
    # Both E1 terms share the exponent c - p s - u0.
    return math.exp(c - p * s - u0) * (s0 - scaled_e1(u0 * (1.0 + p / a), policy)) / p


def laplace_shifted_e1(p, a, b, s, policy=None):
    """
    The Laplace transform int_s^inf e^(-p x) E1(a x + b) dx
    = (e^(-p s) / p) E1(b + a s) - (e^(b p / a) / p) E1((b + a s)(1 + p / a)).

    Args:
        p: The transform variable, > 0
        a: Slope of the E1 argument, > 0
        b: Offset of the E1 argument, > 0
        s: Lower integration limit, >= 0
    """
    for name, value in (("p", p), ("a", a), ("b", b)):
        if not value > 0:
            raise DomainError("laplace_shifted_e1 requires {} > 0, got {}.".format(name, value))
    if not s >= 0:
        raise DomainError("laplace_shifted_e1 requires s >= 0, got {}.".format(s))
    return shifted_e1_transform(0.0, p, a, b, s, policy)
