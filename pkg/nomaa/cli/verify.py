# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
The verification suite behind `nomaa verify`.

`fast` checks the kernels against scipy, the orderings and selection rules of the closed forms on a parameter grid,
and every registered closed form against quadrature at the reference operating point.
`full` adds the large quadrature grids, the Monte Carlo cross-checks, the high-SNR slopes, the OMA/NOMA crossover
and the three-user experiment.
"""
import logging
import math

import numpy as np
from scipy.special import exp1

from nomaa.analysis import full_csit, kernels, no_csit, supported
from nomaa.analysis.channel import KScenario, Scenario
from nomaa.analysis.exceptions import NoCrossoverError
from nomaa.analysis.oracle import (
    alpha_by_quadrature,
    candidate_strategies,
    e1_by_quadrature,
    formulas,
    laplace_by_quadrature,
    mc_rate_full_csit,
    mc_throughput,
    quad_verify,
)
from nomaa.analysis.supported import Strategy, Target

from .timer import Timer

logger = logging.getLogger(__name__)

REFERENCE = (0.1, 0.9, 10.0)
"""(P1, P2, gamma in dB) of the reference operating point."""

REFERENCE_RHO_DB = (0.0, 10.0, 20.0, 30.0, 40.0)

K_USER_POWERS = (0.05, 0.15, 0.8)

K_USER_RHO_DB = tuple(range(-10, 45, 5))

_STRATEGIES = (Strategy.noma, Strategy.oma, Strategy.noma_a)


class Check:
    """
    Outcome of one verification: the measured value against its tolerance.
    """

    def __init__(self, name, measured, tolerance, passed, elapsed=None):
        self.name = name
        self.measured = measured
        self.tolerance = tolerance
        self.passed = bool(passed)
        self.elapsed = elapsed

    def __str__(self):
        timing = "" if self.elapsed is None else " ({:.1f} s)".format(self.elapsed)
        return "{} {}: measured {} / tolerance {}{}".format(
            "PASS" if self.passed else "FAIL", self.name, self.measured, self.tolerance, timing
        )


def _max_rel_err(values, references):
    values = np.asarray(values, dtype=np.float64)
    references = np.asarray(references, dtype=np.float64)
    return float(np.max(np.abs(values - references) / np.maximum(np.abs(references), 1e-300)))


def _bound(name, measured, tolerance):
    return Check(name, "{:.3e}".format(measured), "{:.1e}".format(tolerance), measured <= tolerance)


def _grid(n):
    """
    Scenarios on an n x n x n grid: P1 in (0, 0.5] with P2 = 1 - P1, gamma in [1, 100], rho in [1e-2, 1e6].
    """
    for p1 in np.linspace(0.05, 0.5, n):
        for gamma in np.logspace(0.0, 2.0, n):
            for rho in np.logspace(-2.0, 6.0, n):
                yield Scenario(p1, 1.0 - p1, gamma, rho)


# Kernels.


def check_e1_grid(rng, n):
    x = np.sort(10.0 ** rng.uniform(-6.0, math.log10(700.0), n))
    name = "E1 vs scipy.special.exp1 on {} points in [1e-6, 700]".format(n)
    checks = [_bound(name, _max_rel_err(kernels.exp_integral_e1(x), exp1(x)), 1e-10)]
    small = x[x <= 30.0]
    scaled = kernels.scaled_e1(small) * np.exp(-small)
    checks.append(_bound("scaled E1 consistency for x <= 30", _max_rel_err(scaled, kernels.exp_integral_e1(small)), 1e-12))
    grid = np.logspace(-6.0, 2.0, 25)
    by_quadrature = [e1_by_quadrature(v) for v in grid]
    checks.append(_bound("E1 vs quadrature on [1e-6, 1e2]", _max_rel_err(kernels.exp_integral_e1(grid), by_quadrature), 1e-10))
    return checks


def check_alpha_grid(rng, n):
    gamma, lam, rho = (10.0 ** rng.uniform(-1.0, 2.0, n) for _ in range(3))
    # Points whose lower limit sits in the underflow range carry no information.
    keep = lam * gamma / rho < 500.0
    values = [kernels.alpha(g, la, r) for g, la, r in zip(gamma[keep], lam[keep], rho[keep])]
    references = [alpha_by_quadrature(g, la, r) for g, la, r in zip(gamma[keep], lam[keep], rho[keep])]
    checks = [_bound("alpha vs quadrature on {} points".format(int(keep.sum())), _max_rel_err(values, references), 1e-10)]
    decreasing = all(
        kernels.alpha(g1, 2.0, 10.0) >= kernels.alpha(g2, 2.0, 10.0)
        for g1, g2 in zip(np.linspace(0.1, 100.0, 100), np.linspace(0.1, 100.0, 100)[1:])
    )
    checks.append(Check("alpha decreasing in gamma", decreasing, True, decreasing))
    return checks


def check_laplace_grid(rng, n):
    p, a, b = (rng.uniform(0.1, 10.0, n) for _ in range(3))
    s = rng.uniform(0.0, 5.0, n)
    values = [kernels.laplace_shifted_e1(*args) for args in zip(p, a, b, s)]
    references = [laplace_by_quadrature(*args) for args in zip(p, a, b, s)]
    return [_bound("Laplace transform of E1 vs quadrature on {} points".format(n), _max_rel_err(values, references), 1e-9)]


# Closed forms.


def check_orderings(n):
    """
    Probability orderings, the weak- and strong-user rate orderings, the NOMA-A activity gain and the no-CSIT selection.
    """
    slack = {"phi": 0.0, "weak": 0.0, "strong": 0.0, "activity": 0.0}
    selection_errors = 0
    count = 0
    for s in _grid(n):
        count += 1
        a_n, b_n = no_csit.phi_noma_weak(s), no_csit.phi_noma_strong(s)
        a_o, b_o = no_csit.phi_oma_weak(s), no_csit.phi_oma_strong(s)
        slack["phi"] = min(slack["phi"], a_n, b_n - a_n, 1.0 - b_n, a_o, b_o - a_o, 1.0 - b_o)
        noma, oma, adaptive = (full_csit.rate_report(s, strategy) for strategy in _STRATEGIES)
        slack["weak"] = min(slack["weak"], noma.r_weak - adaptive.r_weak, adaptive.r_weak - oma.r_weak)
        slack["strong"] = min(slack["strong"], adaptive.r_strong - noma.r_strong)
        activity = [full_csit.activity_probability(s, strategy) for strategy in _STRATEGIES]
        slack["activity"] = min(slack["activity"], activity[2] - max(activity[0], activity[1]))
        t_noma = no_csit.throughput(s, Strategy.noma).t_sum
        t_oma = no_csit.throughput(s, Strategy.oma).t_sum
        expected = Strategy.noma if t_noma >= t_oma else Strategy.oma
        selection_errors += int(no_csit.select_no_csit(s).strategy != expected)
    names = {
        "phi": "0 <= phi_A <= phi_B <= 1 (NOMA and OMA)",
        "weak": "weak-user rates NOMA >= NOMA-A >= OMA",
        "strong": "strong-user rates NOMA-A >= NOMA",
        "activity": "NOMA-A activity >= max(NOMA, OMA)",
    }
    checks = [
        Check("{} on {} scenarios".format(names[key], count), "{:.3e}".format(value), ">= -1e-9", value >= -1e-9)
        for key, value in slack.items()
    ]
    checks.append(Check("no-CSIT selection = argmax of sum throughput", selection_errors, 0, selection_errors == 0))
    return checks


def check_ga_monotone(n, n_rho):
    violations = 0
    rhos = np.logspace(-2.0, 6.0, n_rho)
    for p1 in np.linspace(0.05, 0.5, n):
        for gamma in np.logspace(0.0, 2.0, n):
            s = Scenario(p1, 1.0 - p1, gamma, 1.0)
            ratios = [no_csit.ga_ratio(s.with_rho(rho)) for rho in rhos]
            # A few ulps of slack: far from the crossover g_A is flat to machine precision.
            violations += sum(1 for r1, r2 in zip(ratios, ratios[1:]) if r2 > r1 * (1.0 + 1e-13))
    return [Check("g_A non-increasing in rho ({} points per cell)".format(n_rho), violations, 0, violations == 0)]


def check_quadrature(extra_config=None):
    p1, p2, gamma_db = REFERENCE
    worst = (0.0, None)
    for rho_db in REFERENCE_RHO_DB:
        s = Scenario.from_db(p1, p2, gamma_db, rho_db)
        for formula_id in formulas():
            _, _, rel_err = quad_verify(s, formula_id, extra_config)
            logger.debug("%s at %g dB: %.3e", formula_id, rho_db, rel_err)
            if not rel_err <= worst[0]:
                worst = (rel_err, "{} at {:g} dB".format(formula_id, rho_db))
    name = "closed forms vs quadrature, {} formulas x {} SNRs".format(len(formulas()), len(REFERENCE_RHO_DB))
    check = _bound(name, worst[0], 1e-6)
    if worst[1] is not None:
        check.name += " (worst: {})".format(worst[1])
    return [check]


# Monte Carlo.


def _within(estimate, expected, sigmas=4.0):
    return abs(estimate.mean - expected) <= sigmas * estimate.std_error + 1e-12


def check_monte_carlo(rng, n_scenarios, samples, seed, extra_config):
    failures = []
    for index in range(n_scenarios):
        p1 = rng.uniform(0.05, 0.5)
        s = Scenario.from_db(p1, 1.0 - p1, rng.uniform(0.0, 12.0), rng.uniform(0.0, 40.0))
        for strategy in (Strategy.noma, Strategy.oma):
            closed = no_csit.throughput(s, strategy)
            report = mc_throughput(s, strategy, samples, seed + index, extra_config)
            if not (_within(report.weak, closed.t_weak) and _within(report.strong, closed.t_strong)):
                failures.append("throughput {} at {}".format(strategy.name, s))
        for strategy in _STRATEGIES:
            closed = full_csit.rate_report(s, strategy)
            report = mc_rate_full_csit(s, strategy, samples, seed + index, extra_config)
            if not (_within(report.weak, closed.r_weak) and _within(report.strong, closed.r_strong)):
                failures.append("rate {} at {}".format(strategy.name, s))
            if not _within(report.activity, full_csit.activity_probability(s, strategy)):
                failures.append("activity {} at {}".format(strategy.name, s))
    for failure in failures:
        logger.warning("Monte Carlo disagreement: %s", failure)
    return [
        Check(
            "closed forms within 4 sigma of {} draws on {} scenarios".format(samples, n_scenarios),
            "{} failure(s)".format(len(failures)),
            "0 failures",
            len(failures) == 0,
        )
    ]


def check_reproducibility(seed):
    s = Scenario.from_db(*REFERENCE, 10.0)
    n, chunk = 200000, 1 << 15
    one = mc_rate_full_csit(s, Strategy.noma_a, n, seed, {supported.N_THREADS: 1, supported.CHUNK_SIZE: chunk})
    many = mc_rate_full_csit(s, Strategy.noma_a, n, seed, {supported.N_THREADS: 4, supported.CHUNK_SIZE: chunk})
    again = mc_rate_full_csit(s, Strategy.noma_a, n, seed, {supported.N_THREADS: 4, supported.CHUNK_SIZE: chunk})
    identical = one == many and many == again
    return [Check("Monte Carlo bit-identical across runs and thread counts", identical, True, identical)]


# Asymptotics and crossover.


def check_slopes():
    s = Scenario.from_db(*REFERENCE, 0.0)
    worst = 0.0
    for strategy in _STRATEGIES:
        for target in (Target.weak, Target.strong, Target.sum):
            analytic = full_csit.asymptotics(s, strategy, target).slope
            fitted = full_csit.fit_asymptote(s, strategy, target).slope
            # Zero slopes are compared against one bit per doubling.
            scale = analytic if analytic > 0 else 1.0 / math.log(2.0)
            worst = max(worst, abs(fitted - analytic) / scale)
    checks = [_bound("fitted vs analytic slopes on [1e5, 1e6]", worst, 0.01)]
    asymptote = full_csit.asymptotics(s, Strategy.noma, Target.strong).intercept
    value = full_csit.rate_noma_strong(s.with_rho(1e8))
    checks.append(_bound("strong NOMA rate at rho = 1e8 vs its asymptote", abs(value - asymptote) / asymptote, 0.005))
    sum_slopes = [full_csit.fit_asymptote(s, strategy, Target.sum).slope for strategy in _STRATEGIES]
    worst_sum = max(abs(slope * math.log(2.0) - 1.0) for slope in sum_slopes)
    checks.append(_bound("fitted sum-rate slopes = one bit per doubling", worst_sum, 0.01))
    return checks


def check_crossover():
    p1, p2, gamma_db = REFERENCE
    low = Scenario.from_db(p1, p2, gamma_db, 0.0)
    high = Scenario.from_db(p1, p2, gamma_db, 40.0)
    noma_first = no_csit.throughput(low, Strategy.noma).t_sum > no_csit.throughput(low, Strategy.oma).t_sum
    oma_last = no_csit.throughput(high, Strategy.oma).t_sum > no_csit.throughput(high, Strategy.noma).t_sum
    checks = [Check("NOMA ahead at 0 dB and OMA ahead at 40 dB", noma_first and oma_last, True, noma_first and oma_last)]
    finite = []
    for target in (Target.weak, Target.strong, Target.sum):
        try:
            rho = no_csit.rho_min(low, target)
            finite.append(math.isfinite(rho) and rho > 0)
        except NoCrossoverError:
            finite.append(False)
    checks.append(Check("rho_min finite for weak, strong and sum", all(finite), True, all(finite)))
    return checks


def check_three_users(samples, seed, extra_config):
    """
    At P = (0.05, 0.15, 0.8), gamma = 10 dB: NOMA leads at low SNR, OMA at high SNR, a mixed strategy in between,
    and the full-CSIT adaptive strategy has the largest all-active probability everywhere.

    At -10 dB every strategy is essentially always in outage, so the low-SNR lead is also checked strictly at the
    first SNR where some strategy has a non-zero throughput.
    """
    candidates = candidate_strategies(len(K_USER_POWERS))
    throughput = {}
    activity_violations = 0
    for rho_db in K_USER_RHO_DB:
        s = KScenario.from_db(K_USER_POWERS, 10.0, rho_db)
        throughput[rho_db] = [mc_throughput(s, c, samples, seed, extra_config).total.mean for c in candidates]
        adaptive = mc_rate_full_csit(s, Strategy.noma_a, samples, seed, extra_config).activity.mean
        for candidate in candidates:
            if mc_rate_full_csit(s, candidate, samples, seed, extra_config).activity.mean > adaptive:
                activity_violations += 1

    noma, oma = 0, len(candidates) - 1
    first = K_USER_RHO_DB[0]
    lowest_ok = throughput[first][noma] >= max(throughput[first])
    nonzero = [rho_db for rho_db in K_USER_RHO_DB if max(throughput[rho_db]) > 0]
    strict_ok = len(nonzero) > 0 and all(
        throughput[nonzero[0]][noma] > value for i, value in enumerate(throughput[nonzero[0]]) if i != noma
    )
    last = K_USER_RHO_DB[-1]
    oma_ok = all(throughput[last][oma] > value for i, value in enumerate(throughput[last]) if i != oma)
    mixed_ok = any(
        any(throughput[rho_db][i] > max(v for j, v in enumerate(throughput[rho_db]) if j != i) for i in range(1, oma))
        for rho_db in K_USER_RHO_DB[1:-1]
    )
    return [
        Check("K=3 NOMA best at {} dB".format(first), lowest_ok, True, lowest_ok),
        Check("K=3 NOMA strictly best at the first SNR with non-zero throughput", strict_ok, True, strict_ok),
        Check("K=3 OMA strictly best at {} dB".format(last), oma_ok, True, oma_ok),
        Check("K=3 a mixed strategy strictly best at some intermediate SNR", mixed_ok, True, mixed_ok),
        Check("K=3 adaptive all-active probability >= every strategy", activity_violations, 0, activity_violations == 0),
    ]


def _timed(checks, function, *args):
    with Timer(function.__name__) as timer:
        results = function(*args)
    results[-1].elapsed = timer.interval
    checks.extend(results)


def run_verify(level, seed=0, samples=None, extra_config=None):
    """
    Runs the verification suite.

    Args:
        level: "fast" or "full"
        seed: Base seed of the random grids and of the Monte Carlo checks
        samples: Monte Carlo draws per estimate in the full suite (10^7 by default)
        extra_config: Optional library configuration (N_THREADS, CHUNK_SIZE, ...)

    Returns:
        The list of `Check`s
    """
    extra_config = {} if extra_config is None else dict(extra_config)
    rng = np.random.default_rng(seed)
    checks = []
    if level == "fast":
        _timed(checks, check_e1_grid, rng, 1000)
        _timed(checks, check_alpha_grid, rng, 200)
        _timed(checks, check_orderings, 5)
        _timed(checks, check_ga_monotone, 5, 20)
        _timed(checks, check_quadrature, dict(extra_config, **{supported.QUAD_EPSREL: 1e-8}))
        _timed(checks, check_reproducibility, seed)
        return checks

    samples = 10 ** 7 if samples is None else samples
    _timed(checks, check_e1_grid, rng, 1000)
    _timed(checks, check_alpha_grid, rng, 1000)
    _timed(checks, check_laplace_grid, rng, 1000)
    _timed(checks, check_orderings, 10)
    _timed(checks, check_ga_monotone, 10, 100)
    _timed(checks, check_quadrature, extra_config)
    _timed(checks, check_monte_carlo, rng, 20, samples, seed, extra_config)
    _timed(checks, check_slopes)
    _timed(checks, check_crossover)
    _timed(checks, check_three_users, max(samples // 10, 10 ** 3), seed, extra_config)
    _timed(checks, check_reproducibility, seed)
    return checks
