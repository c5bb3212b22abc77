# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
All strategies, metrics, engines and configurations settings supported in nomaa are registered here.

**Supported Strategies (two users)**
oma,
noma,
noma-a,

**Supported Strategies (K users, Monte Carlo only)**
pure NOMA, pure OMA and every mixed NOMA/OMA partition (see `nomaa.analysis.oracle.candidate_strategies`)

**Supported Metrics**
throughput (no CSIT),
rate (full CSIT),
activity (probability that every user is active),
rho_min (OMA/NOMA crossover),
asymptote (high-SNR slope and intercept),

**Supported Engines**
closed_form,
monte_carlo,
quadrature,
"""
from enum import Enum

from .exceptions import ConfigurationError


class Strategy(Enum):
    """
    Multiple access strategies. `noma_a` is the adaptive one.
    """

    oma = 1
    noma = 2
    noma_a = 3


class Target(Enum):
    """
    Which user (or their sum) a metric refers to.
    """

    weak = 1
    strong = 2
    sum = 3


class Provenance(Enum):
    """
    The engine that produced a value.
    """

    closed_form = 1
    monte_carlo = 2
    quadrature = 3


class Metric(Enum):
    throughput = 1
    rate = 2
    activity = 3
    rho_min = 4
    asymptote = 5


class Mode(Enum):
    """
    Per-slot transmission modes of the full-CSIT adaptive strategy.
    """

    noma_both = 1
    strong_only_free = 2
    oma_both = 3
    weak_only_free = 4
    strong_only_fallback = 5
    none = 6


_ACTIVE_FLAGS = {
    Mode.noma_both: (True, True),
    Mode.strong_only_free: (False, True),
    Mode.oma_both: (True, True),
    Mode.weak_only_free: (True, False),
    Mode.strong_only_fallback: (False, True),
    Mode.none: (False, False),
}


def active_flags(mode):
    """
    Returns the (active_weak, active_strong) flags implied by a `Mode`.
    """
    return _ACTIVE_FLAGS[mode]


def parse_enum(enum_class, value, field=None):
    """
    Maps a user provided string (case insensitive, dashes or underscores) into a member of `enum_class`.

    Args:
        enum_class: One of the enums defined in this module
        value: A member of `enum_class` or its name
        field: The name of the configuration field being parsed, used in error messages

    Returns:
        The enum member
    """
    if isinstance(value, enum_class):
        return value
    key = str(value).strip().lower().replace("-", "_")
    if key in enum_class.__members__:
        return enum_class[key]
    raise ConfigurationError(
        "Unknown value '{}' for {}. Accepted values are: {}.".format(
            value, field or enum_class.__name__, ", ".join(m.replace("_", "-") for m in enum_class.__members__)
        )
    )


# Supported configurations settings accepted by nomaa are defined below.
N_THREADS = "n_threads"
"""Number of worker threads used by the Monte Carlo executor and by sweeps over grid cells.
By default this is the number of physical cores. Results never depend on this value."""

CHUNK_SIZE = "chunk_size"
"""Number of channel draws per Monte Carlo chunk. Each chunk has its own seed-derived random stream,
so changing this value changes the draws (while changing N_THREADS does not)."""

DEVICE = "device"
"""The torch device used by the Monte Carlo operators. Defaults to cpu."""

SERIES_CUTOFF = "series_cutoff"
"""Argument below which E1 is evaluated with its power series instead of the continued fraction."""

MAX_TERMS = "max_terms"
"""Maximum number of series terms / continued fraction iterations used by the E1 kernel."""

REL_TOL = "rel_tol"
"""Target relative error of the E1 kernel."""

EQUAL_POWER_TOL = "equal_power_tol"
"""Relative gap |lambda_1 - lambda_2| / max(lambda_1, lambda_2) below which the equal-power limits are used."""

QUAD_EPSREL = "quad_epsrel"
"""Relative tolerance requested to each adaptive quadrature call of the oracle."""

QUAD_LIMIT = "quad_limit"
"""Maximum number of subintervals of each adaptive quadrature call of the oracle."""

RHO_MIN_SCAN_POINTS = "rho_min_scan_points"
"""Number of log-spaced points scanned before bisecting for the OMA/NOMA crossover."""

RHO_MIN_SCAN_LOW = "rho_min_scan_low"
"""Lower end (linear) of the crossover scan."""

RHO_MIN_SCAN_HIGH = "rho_min_scan_high"
"""Upper end (linear) of the crossover scan."""

RHO_MIN_RTOL = "rho_min_rtol"
"""Relative tolerance of the crossover bisection."""

ASYMPTOTE_FIT_RHO = "asymptote_fit_rho"
"""Pair of (linear) SNR values used to fit slopes and intercepts numerically."""
