# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Monte Carlo link simulation of every strategy, for two users and for K users.

Estimates are deterministic functions of (scenario, strategy, n, seed, chunk size): the draws of chunk i come from
a generator seeded by (seed, i) and the chunk sums are reduced in chunk order whatever the number of threads.
"""
import logging

from .._utils import resolve_extra_config
from ..channel import KScenario, Scenario
from ..exceptions import ConfigurationError
from ..no_csit import select_no_csit
from ..reports import McEstimate, MonteCarloReport
from ..supported import Mode, Strategy, parse_enum
from ._executor import Executor
from ._strategy_implementations import (
    KUserAdaptiveFullCsit,
    KUserStrategy,
    TwoUserAdaptiveFullCsit,
    TwoUserFullCsit,
    TwoUserNoCsit,
)
from .mixed_strategy import MixedStrategy, candidate_strategies, parse_mixed_strategy

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000
"""Smallest number of draws accepted by the Monte Carlo functions."""


def _check_samples(n):
    if int(n) < MIN_SAMPLES:
        raise ConfigurationError("Monte Carlo estimates need at least {} draws, got {}.".format(MIN_SAMPLES, n))
    return int(n)


def _resolve_strategy(s, strategy):
    """
    Returns (scenario, strategy) where strategy is either a two-user `Strategy` on a `Scenario`
    or a `MixedStrategy` / `Strategy.noma_a` on a `KScenario`.
    """
    if not isinstance(s, (Scenario, KScenario)):
        raise ConfigurationError("Expected a Scenario or a KScenario, got {}.".format(type(s).__name__))
    if isinstance(strategy, str) and strategy.strip().lower().startswith("mixed"):
        strategy = parse_mixed_strategy(strategy, len(s.powers))
    if isinstance(strategy, MixedStrategy):
        if strategy.n_users != len(s.powers):
            raise ConfigurationError(
                "Strategy {} is defined for {} users but the scenario has {}.".format(
                    strategy.label, strategy.n_users, len(s.powers)
                )
            )
        return (s.as_k_scenario() if isinstance(s, Scenario) else s), strategy
    strategy = parse_enum(Strategy, strategy, "strategy")
    if isinstance(s, Scenario):
        return s, strategy
    if strategy == Strategy.noma:
        return s, MixedStrategy.pure_noma(s.n_users)
    if strategy == Strategy.oma:
        return s, MixedStrategy.pure_oma(s.n_users)
    return s, strategy


def _report(totals, n_users, strategy, seed, mode_keys=None, chosen=None):
    estimates = [McEstimate(*totals.column(i), totals.n, seed) for i in range(2 * n_users + 2)]
    mode_frequencies = None
    if mode_keys is not None:
        frequencies = totals.label_counts / totals.n
        mode_frequencies = {key: float(frequencies[i]) for i, key in enumerate(mode_keys)}
    return MonteCarloReport(
        per_user=estimates[:n_users],
        per_rank=estimates[n_users : 2 * n_users],
        total=estimates[2 * n_users],
        activity=estimates[2 * n_users + 1],
        strategy=strategy,
        mode_frequencies=mode_frequencies,
        chosen=chosen,
    )


def _run(operator, s, n, seed, extra_config):
    executor = Executor(operator, s.powers, extra_config)
    return executor.run(n, seed)


def mc_throughput(s, strategy, n, seed, extra_config=None):
    """
    Monte Carlo throughput of a no-CSIT strategy: users transmit log2(1 + gamma) bits/s/Hz and count them
    when they are decoded.

    Args:
        s: A `Scenario` or a `KScenario`
        strategy: A `Strategy` (or its name), a `MixedStrategy`, or a "mixed-i-j" label
        n: Number of draws, >= 1000
        seed: The base seed
        extra_config: Optional dictionary of settings (N_THREADS, CHUNK_SIZE, DEVICE)

    Returns:
        A `MonteCarloReport` with per-user, sum and all-decoded estimates
    """
    n = _check_samples(n)
    extra_config = resolve_extra_config(extra_config)
    s, strategy = _resolve_strategy(s, strategy)

    if isinstance(s, Scenario):
        if strategy == Strategy.noma_a:
            chosen = select_no_csit(s).strategy
            logger.debug("no-CSIT adaptive strategy picks %s for %s", chosen.name, s)
            totals = _run(TwoUserNoCsit(s, chosen), s, n, seed, extra_config)
            return _report(totals, 2, Strategy.noma_a, seed, chosen=chosen)
        return _report(_run(TwoUserNoCsit(s, strategy), s, n, seed, extra_config), 2, strategy, seed)

    if strategy == Strategy.noma_a:
        # The large-scale decision: every candidate sees the same draws and the best mean sum throughput wins.
        best = None
        for candidate in candidate_strategies(s.n_users):
            totals = _run(KUserStrategy(s, candidate), s, n, seed, extra_config)
            if best is None or totals.means[2 * s.n_users] > best[1].means[2 * s.n_users]:
                best = (candidate, totals)
        logger.debug("no-CSIT adaptive strategy picks %s for %s", best[0].label, s)
        return _report(best[1], s.n_users, Strategy.noma_a, seed, chosen=best[0])
    return _report(_run(KUserStrategy(s, strategy), s, n, seed, extra_config), s.n_users, strategy, seed)


def mc_rate_full_csit(s, strategy, n, seed, extra_config=None):
    """
    Monte Carlo average data rates of a full-CSIT strategy: an active user transmits at its instantaneous capacity.

    For two users the adaptive strategy applies the per-draw decision of `decide_noma_a`; for K users it picks,
    per draw, the pure or mixed strategy activating the most users (ties: larger sum rate, then fewer OMA slots).

    Args:
        s: A `Scenario` or a `KScenario`
        strategy: A `Strategy` (or its name), a `MixedStrategy`, or a "mixed-i-j" label
        n: Number of draws, >= 1000
        seed: The base seed
        extra_config: Optional dictionary of settings (N_THREADS, CHUNK_SIZE, DEVICE)

    Returns:
        A `MonteCarloReport` with per-user, sum and all-active estimates, plus the mode frequencies of
        the adaptive strategy
    """
    n = _check_samples(n)
    extra_config = resolve_extra_config(extra_config)
    s, strategy = _resolve_strategy(s, strategy)

    if isinstance(s, Scenario):
        if strategy == Strategy.noma_a:
            totals = _run(TwoUserAdaptiveFullCsit(s), s, n, seed, extra_config)
            return _report(totals, 2, strategy, seed, mode_keys=sorted(Mode, key=lambda mode: mode.value))
        return _report(_run(TwoUserFullCsit(s, strategy), s, n, seed, extra_config), 2, strategy, seed)

    if strategy == Strategy.noma_a:
        operator = KUserAdaptiveFullCsit(s)
        totals = _run(operator, s, n, seed, extra_config)
        return _report(totals, s.n_users, strategy, seed, mode_keys=operator.candidates)
    operator = KUserStrategy(s, strategy, full_csit=True)
    return _report(_run(operator, s, n, seed, extra_config), s.n_users, strategy, seed)
