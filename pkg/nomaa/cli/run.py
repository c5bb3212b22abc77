# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Command line driver: `nomaa sweep`, `nomaa verify`, `nomaa rho-min-map` and `nomaa decide`.

Every flag can also be given in a `--config` file (`rho-db-start=-10`) or as a `NOMAA_<FLAG>` environment variable
(`NOMAA_RHO_DB_START=-10`); flags win over the environment, which wins over the file.
"""
import argparse
import logging
import sys

from nomaa import __version__
from nomaa.analysis.channel import Scenario
from nomaa.analysis.exceptions import (
    ConfigurationError,
    ConstantError,
    DomainError,
    MissingFormula,
    NoCrossoverError,
    ScenarioError,
)
from nomaa.analysis.full_csit import decide_noma_a

from .config import SWEEP_KEYS, DEFAULTS, SweepSpec, merge_settings, parse_grid
from .sweep import rho_min_map, run_sweep, write_csv
from .timer import Timer
from .verify import run_verify

logger = logging.getLogger(__name__)

RHO_MIN_MAP_KEYS = ("p1", "gamma-db", "output")

RHO_MIN_MAP_DEFAULTS = {"p1": "0.05:0.5:0.05", "gamma-db": "0:20:1", "output": "rho_min_map.csv"}

VERIFY_KEYS = ("level", "seed", "samples", "threads")

VERIFY_DEFAULTS = {"level": "fast", "seed": "0", "samples": "", "threads": "0"}

_ERRORS = (ConfigurationError, ConstantError, DomainError, MissingFormula, NoCrossoverError, ScenarioError, OSError)


def _add_sweep_flags(parser):
    parser.add_argument("--p1", default=None, type=str, help="Power of user 1: a number, a comma list or start:stop:step")
    parser.add_argument("--p2", default=None, type=str, help="Power of user 2, or 'complement' for 1 - p1")
    parser.add_argument(
        "--powers", default=None, type=str, help="Comma separated ascending powers of a K-user sweep (Monte Carlo only)"
    )
    parser.add_argument("--gamma-db", default=None, type=str, help="Minimum SINR in dB: a number, a list or a range")
    parser.add_argument("--rho-db-start", default=None, type=str, help="First average SNR in dB")
    parser.add_argument("--rho-db-stop", default=None, type=str, help="Last average SNR in dB (included)")
    parser.add_argument("--rho-db-step", default=None, type=str, help="SNR step in dB")
    parser.add_argument(
        "--strategies",
        default=None,
        type=str,
        help="Comma separated strategies: oma, noma, noma-a, and mixed-<g1>-<g2>... for K-user sweeps",
    )
    parser.add_argument(
        "--metrics", default=None, type=str, help="Comma separated metrics: throughput, rate, activity, rho-min, asymptote"
    )
    parser.add_argument(
        "--engines", default=None, type=str, help="Comma separated engines: closed-form, monte-carlo, quadrature"
    )
    parser.add_argument("--samples", default=None, type=str, help="Monte Carlo draws per estimate (>= 1000)")
    parser.add_argument("--seed", default=None, type=str, help="Seed of the Monte Carlo streams")
    parser.add_argument("--threads", default=None, type=str, help="Worker threads; 0 means one per physical core")
    parser.add_argument("--output", default=None, type=str, help="Output CSV file, '-' for standard output")


def parse_args(argv=None):
    parser = argparse.ArgumentParser(prog="nomaa", description="Closed-form, Monte Carlo and quadrature NOMA/OMA analysis")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("--verbose", "-v", action="count", default=0, help="-v for info, -vv for debug logging")
    parser.add_argument("--config", default=None, type=str, help="Flat key=value file with default flag values")
    verbs = parser.add_subparsers(dest="verb", metavar="verb")
    verbs.required = True

    sweep = verbs.add_parser("sweep", help="Evaluate strategies and metrics over a parameter grid and write a CSV")
    _add_sweep_flags(sweep)

    verify = verbs.add_parser("verify", help="Run the verification suite")
    verify.add_argument("--level", default=None, type=str, choices=["fast", "full"], help="fast (default) or full")
    verify.add_argument("--seed", default=None, type=str, help="Seed of the random grids and Monte Carlo checks")
    verify.add_argument("--samples", default=None, type=str, help="Monte Carlo draws per estimate in the full suite")
    verify.add_argument("--threads", default=None, type=str, help="Worker threads; 0 means one per physical core")

    rho_min = verbs.add_parser("rho-min-map", help="Crossover SNR per (p1, gamma, target) with p2 = 1 - p1")
    rho_min.add_argument("--p1", default=None, type=str, help="Grid of p1 values in (0, 0.5]")
    rho_min.add_argument("--gamma-db", default=None, type=str, help="Grid of minimum SINRs in dB")
    rho_min.add_argument("--output", default=None, type=str, help="Output CSV file, '-' for standard output")

    decide = verbs.add_parser("decide", help="Print the adaptive full-CSIT decision for one channel draw")
    _add_sweep_flags(decide)
    decide.add_argument("--xa", required=True, type=float, help="Channel gain of the weak user")
    decide.add_argument("--xb", required=True, type=float, help="Channel gain of the strong user")
    return parser.parse_args(argv)


def _flags(args, keys):
    return {key: getattr(args, key.replace("-", "_"), None) for key in keys}


def _configure_logging(verbose):
    level = logging.WARNING if verbose == 0 else (logging.INFO if verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")


def sweep(args, environ=None):
    spec = SweepSpec.from_sources(args.config, _flags(args, SWEEP_KEYS), environ)
    with Timer("sweep") as timer:
        frame = run_sweep(spec)
    write_csv(frame, spec.output)
    if spec.output != "-":
        print("Wrote {} rows to '{}' in {:.1f} s".format(len(frame), spec.output, timer.interval))
    return 0


def verify(args, environ=None):
    settings = merge_settings(VERIFY_KEYS, VERIFY_DEFAULTS, args.config, _flags(args, VERIFY_KEYS), environ)
    level = settings["level"].strip().lower()
    if level not in ("fast", "full"):
        raise ConfigurationError("Field 'level' must be 'fast' or 'full', got '{}'.".format(settings["level"]))
    # Reuse the sweep validation of seed, samples and threads.
    spec_settings = dict(DEFAULTS, seed=settings["seed"], threads=settings["threads"])
    if len(settings["samples"].strip()) > 0:
        spec_settings.update(samples=settings["samples"], engines="monte-carlo")
    spec = SweepSpec(spec_settings)
    samples = spec.samples if len(settings["samples"].strip()) > 0 else None

    with Timer("verify") as timer:
        checks = run_verify(level, seed=spec.seed, samples=samples, extra_config=spec.extra_config())
    for check in checks:
        print(check)
    failed = [check for check in checks if not check.passed]
    print("{} checks, {} failed, {:.1f} s".format(len(checks), len(failed), timer.interval))
    return 1 if len(failed) > 0 else 0


def rho_min_map_verb(args, environ=None):
    settings = merge_settings(
        RHO_MIN_MAP_KEYS, RHO_MIN_MAP_DEFAULTS, args.config, _flags(args, RHO_MIN_MAP_KEYS), environ
    )
    p1_grid = parse_grid("p1", settings["p1"])
    if not all(0 < p1 <= 0.5 for p1 in p1_grid):
        raise ConfigurationError("Field 'p1' must lie in (0, 0.5] when p2 = 1 - p1, got {}.".format(p1_grid))
    gamma_db_grid = parse_grid("gamma-db", settings["gamma-db"])
    frame = rho_min_map(p1_grid, gamma_db_grid)
    write_csv(frame, settings["output"])
    if settings["output"] != "-":
        print("Wrote {} rows to '{}'".format(len(frame), settings["output"]))
    return 0


def decide(args, environ=None):
    # The operating point is the first grid point of the sweep settings.
    spec = SweepSpec.from_sources(args.config, _flags(args, SWEEP_KEYS), environ)
    if spec.is_k_user:
        raise ConfigurationError("Field 'powers': decide works on the two-user uplink only.")
    p1, p2 = spec.power_pairs()[0]
    s = Scenario.from_db(p1, p2, spec.gamma_db[0], spec.rho_db[0])
    print("{}: {}".format(s, decide_noma_a(s, (args.xa, args.xb))))
    return 0


_VERBS = {"sweep": sweep, "verify": verify, "rho-min-map": rho_min_map_verb, "decide": decide}


def main(argv=None, environ=None):
    args = parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return _VERBS[args.verb](args, environ)
    except _ERRORS as e:
        # One line: the explanatory paragraph of the domain errors stays in the debug log.
        message = str(e).strip().splitlines()[0]
        logger.debug("%s failed", args.verb, exc_info=True)
        print("nomaa {}: error: {}".format(args.verb, message), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
