# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Collection of utility functions used throughout nomaa.
"""

from copy import deepcopy
import math

import numpy as np
import psutil

from . import supported
from .exceptions import ConfigurationError, ConstantError


def db_to_linear(value_db):
    """
    Converts a power ratio in dB into its linear value (10 log10 convention).
    """
    return np.power(10.0, np.asarray(value_db, dtype=np.float64) / 10.0)[()]


def linear_to_db(value):
    """
    Converts a linear power ratio into dB. Zero maps to -inf and inf to inf.
    """
    with np.errstate(divide="ignore"):
        return (10.0 * np.log10(np.asarray(value, dtype=np.float64)))[()]


_DEFAULTS = {
    supported.CHUNK_SIZE: 1 << 18,
    supported.DEVICE: "cpu",
    supported.SERIES_CUTOFF: 1.0,
    supported.MAX_TERMS: 500,
    supported.REL_TOL: 1e-12,
    supported.EQUAL_POWER_TOL: 1e-6,
    supported.QUAD_EPSREL: 1e-10,
    supported.QUAD_LIMIT: 200,
    supported.RHO_MIN_SCAN_POINTS: 200,
    supported.RHO_MIN_SCAN_LOW: 1e-6,
    supported.RHO_MIN_SCAN_HIGH: 1e12,
    supported.RHO_MIN_RTOL: 1e-6,
    supported.ASYMPTOTE_FIT_RHO: (1e5, 1e6),
}


def resolve_extra_config(extra_config=None):
    """
    Returns a copy of `extra_config` with every missing key set to its default value.
    The number of threads defaults to the number of physical cores.
    """
    extra_config = {} if extra_config is None else deepcopy(extra_config)
    unknown = [key for key in extra_config if key not in _DEFAULTS and key != supported.N_THREADS]
    if len(unknown) > 0:
        raise ConfigurationError("Unknown configuration keys {}.".format(sorted(unknown)))
    for key, value in _DEFAULTS.items():
        extra_config.setdefault(key, value)
    if supported.N_THREADS not in extra_config:
        extra_config[supported.N_THREADS] = psutil.cpu_count(logical=False) or 1
    if extra_config[supported.N_THREADS] < 1:
        raise ConfigurationError("{} must be >= 1, got {}.".format(supported.N_THREADS, extra_config[supported.N_THREADS]))
    if extra_config[supported.CHUNK_SIZE] < 1:
        raise ConfigurationError("{} must be >= 1, got {}.".format(supported.CHUNK_SIZE, extra_config[supported.CHUNK_SIZE]))
    return extra_config


def is_equal_power(lambda_1, lambda_2, tol):
    """
    Whether two exponential rates are close enough to switch to the equal-power limits.
    """
    return abs(lambda_1 - lambda_2) < tol * max(lambda_1, lambda_2)


def nats_to_bits(value):
    return value / math.log(2.0)


class _Constants(object):
    """
    Class enabling the proper definition of constants.
    """

    def __init__(self, constants, other_constants=None):
        for constant in dir(constants):
            if constant.isupper():
                setattr(self, constant, getattr(constants, constant))
        for constant in dir(other_constants):
            if constant.isupper():
                setattr(self, constant, getattr(other_constants, constant))

    def __setattr__(self, name, value):
        if name in self.__dict__:
            raise ConstantError("Overwriting a constant is not allowed {}".format(name))
        self.__dict__[name] = value
