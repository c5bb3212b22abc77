# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Parameter sweeps producing plot-ready CSV.

One row per (grid point, strategy, metric, engine). Values are in bits/s/Hz, probabilities for `activity`
(in the `sum` column) and dB for `rho_min`. Quantities an engine does not produce are left empty.

A `rho_min` of inf means NOMA stays ahead over the whole scan, -inf means OMA is already at least as good
at its lower end (in `rho_min_map` the linear value is then 0).
"""
from concurrent.futures import ThreadPoolExecutor
import logging
import math
import sys

import pandas as pd
import psutil

from nomaa.analysis import full_csit, no_csit
from nomaa.analysis._utils import db_to_linear, linear_to_db
from nomaa.analysis.channel import KScenario, Scenario
from nomaa.analysis.exceptions import NoCrossoverError
from nomaa.analysis.oracle import mc_rate_full_csit, mc_throughput, quad_verify
from nomaa.analysis.supported import Metric, Provenance, Strategy, Target

logger = logging.getLogger(__name__)

TWO_USER_COLUMNS = [
    "p1",
    "p2",
    "gamma_db",
    "gamma",
    "rho_db",
    "rho",
    "strategy",
    "metric",
    "engine",
    "weak",
    "strong",
    "sum",
    "std_error_weak",
    "std_error_strong",
    "std_error_sum",
]

RHO_MIN_MAP_COLUMNS = ["p1", "p2", "gamma_db", "gamma", "target", "rho_min", "rho_min_db"]

_NAN = float("nan")

# Quadrature identifiers of the weak and strong users of every strategy.
_THROUGHPUT_FORMULAS = {
    Strategy.noma: ("phi_noma_weak", "phi_noma_strong"),
    Strategy.oma: ("phi_oma_weak", "phi_oma_strong"),
}
_RATE_FORMULAS = {
    Strategy.noma: ("rate_noma_weak", "rate_noma_strong"),
    Strategy.oma: ("rate_oma_weak", "rate_oma_strong"),
    Strategy.noma_a: ("rate_noma_a_weak", "rate_noma_a_strong"),
}
_ACTIVITY_FORMULAS = {
    Strategy.noma: "phi_noma_weak",
    Strategy.oma: "phi_oma_weak",
    Strategy.noma_a: "activity_noma_a",
}


def k_user_columns(n_users):
    users = ["user_{}".format(k) for k in range(1, n_users + 1)]
    errors = ["std_error_{}".format(user) for user in users]
    scenario = ["powers", "gamma_db", "gamma", "rho_db", "rho", "strategy", "metric", "engine"]
    return scenario + users + ["sum"] + errors + ["std_error_sum"]


def write_csv(frame, path):
    """
    Writes a sweep with full precision, '.' decimals, LF line endings and UTF-8. `-` writes to standard output.
    """
    target = sys.stdout if path == "-" else path
    frame.to_csv(target, index=False, float_format="%.17e", na_rep="", lineterminator="\n", encoding="utf-8")


def _strategy_name(strategy):
    return strategy if isinstance(strategy, str) else strategy.name


def _values(weak=_NAN, strong=_NAN, total=_NAN, errors=(_NAN, _NAN, _NAN)):
    return {
        "weak": weak,
        "strong": strong,
        "sum": total,
        "std_error_weak": errors[0],
        "std_error_strong": errors[1],
        "std_error_sum": errors[2],
    }


def _quad(s, formula_id, extra_config):
    return quad_verify(s, formula_id, extra_config)[1]


class _CellEvaluator:
    """
    Evaluates the rows of one two-user grid cell. Monte Carlo runs are shared between the metrics of a cell.
    """

    def __init__(self, spec, s, extra_config):
        self.spec = spec
        self.s = s
        self.extra_config = extra_config
        self._full_csit = {}

    def _mc_full_csit(self, strategy):
        if strategy not in self._full_csit:
            spec = self.spec
            self._full_csit[strategy] = mc_rate_full_csit(self.s, strategy, spec.samples, spec.seed, self.extra_config)
        return self._full_csit[strategy]

    @staticmethod
    def _from_report(report):
        errors = (report.weak.std_error, report.strong.std_error, report.total.std_error)
        return _values(report.weak.mean, report.strong.mean, report.total.mean, errors)

    def throughput(self, strategy, engine):
        s = self.s
        if engine == Provenance.closed_form:
            report = no_csit.throughput(s, strategy)
            return _values(report.t_weak, report.t_strong, report.t_sum)
        if engine == Provenance.monte_carlo:
            return self._from_report(mc_throughput(s, strategy, self.spec.samples, self.spec.seed, self.extra_config))
        chosen = no_csit.select_no_csit(s).strategy if strategy == Strategy.noma_a else strategy
        bits = math.log2(1.0 + s.gamma)
        weak_id, strong_id = _THROUGHPUT_FORMULAS[chosen]
        weak, strong = bits * _quad(s, weak_id, self.extra_config), bits * _quad(s, strong_id, self.extra_config)
        return _values(weak, strong, weak + strong)

    def rate(self, strategy, engine):
        s = self.s
        if engine == Provenance.closed_form:
            report = full_csit.rate_report(s, strategy, self.extra_config)
            return _values(report.r_weak, report.r_strong, report.r_sum)
        if engine == Provenance.monte_carlo:
            return self._from_report(self._mc_full_csit(strategy))
        weak_id, strong_id = _RATE_FORMULAS[strategy]
        weak, strong = _quad(s, weak_id, self.extra_config), _quad(s, strong_id, self.extra_config)
        return _values(weak, strong, weak + strong)

    def activity(self, strategy, engine):
        if engine == Provenance.closed_form:
            return _values(total=full_csit.activity_probability(self.s, strategy))
        if engine == Provenance.monte_carlo:
            activity = self._mc_full_csit(strategy).activity
            return _values(total=activity.mean, errors=(_NAN, _NAN, activity.std_error))
        return _values(total=_quad(self.s, _ACTIVITY_FORMULAS[strategy], self.extra_config))


def _two_user_rho_rows(spec, p1, p2, gamma_db, rho_db, extra_config):
    s = Scenario.from_db(p1, p2, gamma_db, rho_db)
    evaluator = _CellEvaluator(spec, s, extra_config)
    base = {"p1": p1, "p2": p2, "gamma_db": gamma_db, "gamma": s.gamma, "rho_db": rho_db, "rho": s.rho}
    rows = []
    for strategy in spec.strategies:
        for metric in spec.metrics:
            if metric not in (Metric.throughput, Metric.rate, Metric.activity):
                continue
            for engine in spec.engines:
                values = getattr(evaluator, metric.name)(strategy, engine)
                row = dict(base, strategy=_strategy_name(strategy), metric=metric.name, engine=engine.name)
                row.update(values)
                rows.append(row)
    return rows


def _rho_min_db(s, target, extra_config):
    try:
        return float(linear_to_db(no_csit.rho_min(s, target, extra_config)))
    except NoCrossoverError as e:
        logger.debug("no crossover for %s: %s", s, e)
        return math.inf


def _two_user_large_scale_rows(spec, p1, p2, gamma_db, extra_config):
    # Rows that do not depend on rho. The scenario's rho is a placeholder.
    s = Scenario(p1, p2, db_to_linear(gamma_db), 1.0)
    base = {"p1": p1, "p2": p2, "gamma_db": gamma_db, "gamma": s.gamma, "rho_db": _NAN, "rho": _NAN}
    targets = (Target.weak, Target.strong, Target.sum)
    rows = []
    if Metric.rho_min in spec.metrics:
        row = dict(base, strategy=Strategy.oma.name, metric=Metric.rho_min.name, engine=Provenance.closed_form.name)
        row.update(_values(*(_rho_min_db(s, target, extra_config) for target in targets)))
        rows.append(row)
    if Metric.asymptote in spec.metrics:
        for strategy in spec.strategies:
            reports = [full_csit.asymptotics(s, strategy, target, extra_config) for target in targets]
            for name in ("slope", "intercept"):
                row = dict(base, strategy=_strategy_name(strategy), metric="asymptote_" + name)
                row["engine"] = Provenance.closed_form.name
                row.update(_values(*(getattr(report, name) for report in reports)))
                rows.append(row)
    return rows


def _k_user_rho_rows(spec, gamma_db, rho_db, extra_config):
    s = KScenario.from_db(spec.powers, gamma_db, rho_db)
    base = {
        "powers": ";".join(repr(p) for p in spec.powers),
        "gamma_db": gamma_db,
        "gamma": s.gamma,
        "rho_db": rho_db,
        "rho": s.rho,
        "engine": Provenance.monte_carlo.name,
    }
    rows = []
    for strategy in spec.strategies:
        full_csit_report = None
        for metric in spec.metrics:
            if metric == Metric.throughput:
                report = mc_throughput(s, strategy, spec.samples, spec.seed, extra_config)
            else:
                if full_csit_report is None:
                    full_csit_report = mc_rate_full_csit(s, strategy, spec.samples, spec.seed, extra_config)
                report = full_csit_report
            row = dict(base, strategy=_strategy_name(strategy), metric=metric.name)
            for k in range(s.n_users):
                user = "user_{}".format(k + 1)
                if metric == Metric.activity:
                    row[user] = row["std_error_" + user] = _NAN
                else:
                    row[user] = report.per_user[k].mean
                    row["std_error_" + user] = report.per_user[k].std_error
            estimate = report.activity if metric == Metric.activity else report.total
            row["sum"], row["std_error_sum"] = estimate.mean, estimate.std_error
            rows.append(row)
    return rows


def _n_workers(spec):
    return spec.threads if spec.threads > 0 else (psutil.cpu_count(logical=False) or 1)


def run_sweep(spec):
    """
    Evaluates every cell of a `SweepSpec`.

    Cells are evaluated concurrently; rows come out in grid order (p1, gamma, rho, strategy, metric, engine),
    followed for every (p1, gamma) by the rows that do not depend on rho.

    Returns:
        A pandas DataFrame with the documented columns
    """
    extra_config = spec.extra_config()
    if spec.is_k_user:
        cells = [(gamma_db, rho_db) for gamma_db in spec.gamma_db for rho_db in spec.rho_db]
        # Monte Carlo cells parallelise internally.
        blocks = [_k_user_rho_rows(spec, gamma_db, rho_db, extra_config) for gamma_db, rho_db in cells]
        columns = k_user_columns(len(spec.powers))
    else:
        jobs = []
        for p1, p2 in spec.power_pairs():
            for gamma_db in spec.gamma_db:
                for rho_db in spec.rho_db:
                    jobs.append((_two_user_rho_rows, (spec, p1, p2, gamma_db, rho_db, extra_config)))
                jobs.append((_two_user_large_scale_rows, (spec, p1, p2, gamma_db, extra_config)))
        logger.debug("sweeping %d cells", len(jobs))
        if Provenance.monte_carlo in spec.engines:
            blocks = [function(*args) for function, args in jobs]
        else:
            with ThreadPoolExecutor(max_workers=_n_workers(spec)) as pool:
                blocks = list(pool.map(lambda job: job[0](*job[1]), jobs))
        columns = TWO_USER_COLUMNS
    rows = [row for block in blocks for row in block]
    return pd.DataFrame(rows, columns=columns)


def rho_min_map(p1_grid, gamma_db_grid, extra_config=None):
    """
    The crossover SNR of every (P1, gamma, target) cell with P2 = 1 - P1. Absent crossovers are inf,
    crossovers at or below the lower end of the scan are 0.

    Returns:
        A pandas DataFrame with columns `RHO_MIN_MAP_COLUMNS`
    """
    rows = []
    for p1 in p1_grid:
        for gamma_db in gamma_db_grid:
            s = Scenario(p1, 1.0 - p1, db_to_linear(gamma_db), 1.0)
            for target in (Target.weak, Target.strong, Target.sum):
                try:
                    value = no_csit.rho_min(s, target, extra_config)
                except NoCrossoverError:
                    value = math.inf
                rows.append(
                    {
                        "p1": p1,
                        "p2": s.p2,
                        "gamma_db": gamma_db,
                        "gamma": s.gamma,
                        "target": target.name,
                        "rho_min": value,
                        "rho_min_db": float(linear_to_db(value)),
                    }
                )
    return pd.DataFrame(rows, columns=RHO_MIN_MAP_COLUMNS)
