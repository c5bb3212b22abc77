# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Sweep configuration: defaults, flat `key=value` files, `NOMAA_*` environment variables and command line flags.

Keys are the flag names without the leading dashes (`rho-db-start=-10`). Later sources override earlier ones:
defaults < config file < environment < flags.
"""
import logging
import math
import os

from nomaa.analysis import supported
from nomaa.analysis.exceptions import ConfigurationError
from nomaa.analysis.oracle import MIN_SAMPLES
from nomaa.analysis.supported import Metric, Provenance, Strategy, parse_enum

logger = logging.getLogger(__name__)

ENV_PREFIX = "NOMAA_"

SWEEP_KEYS = (
    "p1",
    "p2",
    "powers",
    "gamma-db",
    "rho-db-start",
    "rho-db-stop",
    "rho-db-step",
    "strategies",
    "metrics",
    "engines",
    "samples",
    "seed",
    "threads",
    "output",
)

DEFAULTS = {
    "p1": "0.1",
    "p2": "0.9",
    "powers": "",
    "gamma-db": "10",
    "rho-db-start": "-10",
    "rho-db-stop": "40",
    "rho-db-step": "5",
    "strategies": "oma,noma,noma-a",
    "metrics": "throughput",
    "engines": "closed-form",
    "samples": "1000000",
    "seed": "0",
    "threads": "0",
    "output": "sweep.csv",
}


def read_config_file(path):
    """
    Reads a flat `key=value` file. Blank lines and lines starting with '#' are ignored.
    """
    settings = {}
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if len(line) == 0 or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError("{}:{}: expected 'key=value', got '{}'.".format(path, number, line))
            key, value = line.split("=", 1)
            settings[key.strip().lstrip("-").replace("_", "-")] = value.strip()
    return settings


def read_environment(keys, environ=None):
    """
    Collects the `NOMAA_<KEY>` variables (upper case, dashes replaced by underscores) of the given keys.
    """
    environ = os.environ if environ is None else environ
    settings = {}
    for key in keys:
        name = ENV_PREFIX + key.upper().replace("-", "_")
        if name in environ:
            settings[key] = environ[name]
    return settings


def merge_settings(keys, defaults, config_path=None, flags=None, environ=None):
    """
    Merges every source of settings into one dictionary of raw strings.

    Args:
        keys: The accepted keys
        defaults: Default values
        config_path: Optional path of a `key=value` file
        flags: Dictionary of flag values, None meaning "not given"
        environ: The environment, `os.environ` if None
    """
    settings = dict(defaults)
    if config_path is not None:
        from_file = read_config_file(config_path)
        unknown = sorted(set(from_file) - set(keys))
        if len(unknown) > 0:
            raise ConfigurationError("Unknown keys {} in config file '{}'.".format(unknown, config_path))
        settings.update(from_file)
    settings.update(read_environment(keys, environ))
    if flags is not None:
        settings.update({key: str(value) for key, value in flags.items() if value is not None and key in keys})
    logger.debug("merged settings: %s", settings)
    return settings


def _number(field, text):
    try:
        value = float(text)
    except ValueError:
        raise ConfigurationError("Field '{}' expects a number, got '{}'.".format(field, text))
    if not math.isfinite(value):
        raise ConfigurationError("Field '{}' must be finite, got '{}'.".format(field, text))
    return value


def _integer(field, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigurationError("Field '{}' expects an integer, got '{}'.".format(field, text))


def inclusive_range(field, start, stop, step):
    """
    start, start + step, ... up to `stop` included (within 1e-9 steps). Values are computed as start + i step.
    """
    if not stop > start:
        raise ConfigurationError("Field '{}': start ({}) must be smaller than stop ({}).".format(field, start, stop))
    if not step > 0:
        raise ConfigurationError("Field '{}': step must be positive, got {}.".format(field, step))
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def parse_grid(field, text):
    """
    Parses a number, a comma separated list, or `start:stop:step` (inclusive stop).
    """
    text = str(text).strip()
    if len(text) == 0:
        raise ConfigurationError("Field '{}' is empty.".format(field))
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError("Field '{}' expects start:stop:step, got '{}'.".format(field, text))
        start, stop, step = (_number(field, part) for part in parts)
        return inclusive_range(field, start, stop, step)
    return [_number(field, part) for part in text.split(",")]


def _names(field, text):
    names = [name.strip() for name in str(text).split(",") if len(name.strip()) > 0]
    if len(names) == 0:
        raise ConfigurationError("Field '{}' must name at least one value.".format(field))
    return names


class SweepSpec:
    """
    A validated sweep: scenario grids, strategies, metrics, engines and Monte Carlo settings.
    """

    def __init__(self, settings):
        """
        Args:
            settings: Dictionary of raw strings keyed by flag name (see `merge_settings`)
        """
        self.powers = None
        if len(settings["powers"].strip()) > 0:
            self.powers = tuple(_number("powers", p) for p in settings["powers"].split(","))
            if len(self.powers) < 2:
                raise ConfigurationError("Field 'powers' needs at least two users.")
            if not all(0 < a <= b for a, b in zip(self.powers, self.powers[1:])):
                raise ConfigurationError("Field 'powers' must be positive and ascending, got {}.".format(self.powers))
        self.p1 = parse_grid("p1", settings["p1"])
        p2 = settings["p2"].strip().lower()
        self.p2 = "complement" if p2 == "complement" else _number("p2", p2)
        self.gamma_db = parse_grid("gamma-db", settings["gamma-db"])
        self.rho_db_start = _number("rho-db-start", settings["rho-db-start"])
        self.rho_db_stop = _number("rho-db-stop", settings["rho-db-stop"])
        self.rho_db_step = _number("rho-db-step", settings["rho-db-step"])
        if self.rho_db_start == self.rho_db_stop:
            # A single SNR point, e.g. the asymptotic maps at 40 dB.
            self.rho_db = [self.rho_db_start]
        else:
            self.rho_db = inclusive_range("rho-db", self.rho_db_start, self.rho_db_stop, self.rho_db_step)

        self.strategies = [self._strategy(name) for name in _names("strategies", settings["strategies"])]
        self.metrics = [parse_enum(Metric, name, "metrics") for name in _names("metrics", settings["metrics"])]
        self.engines = [parse_enum(Provenance, name, "engines") for name in _names("engines", settings["engines"])]
        self.samples = _integer("samples", settings["samples"])
        self.seed = _integer("seed", settings["seed"])
        self.threads = _integer("threads", settings["threads"])
        self.output = settings["output"]

        if Provenance.monte_carlo in self.engines and self.samples < MIN_SAMPLES:
            raise ConfigurationError("Field 'samples' must be >= {} with the monte-carlo engine.".format(MIN_SAMPLES))
        if self.threads < 0:
            raise ConfigurationError("Field 'threads' must be >= 0 (0 means one per physical core).")
        if self.powers is None:
            for p1, p2 in self.power_pairs():
                if not 0 < p1 <= p2:
                    raise ConfigurationError("Fields 'p1'/'p2' need 0 < p1 <= p2, got p1={}, p2={}.".format(p1, p2))
            large_scale = [m.name.replace("_", "-") for m in self.metrics if m in (Metric.rho_min, Metric.asymptote)]
            if len(large_scale) > 0 and Provenance.closed_form not in self.engines:
                raise ConfigurationError("Field 'metrics': {} need the closed-form engine.".format(", ".join(large_scale)))
        else:
            if any(engine != Provenance.monte_carlo for engine in self.engines):
                raise ConfigurationError("Field 'engines': K-user sweeps ('powers') support the monte-carlo engine only.")
            if any(metric not in (Metric.throughput, Metric.rate, Metric.activity) for metric in self.metrics):
                raise ConfigurationError("Field 'metrics': K-user sweeps support throughput, rate and activity only.")

    def _strategy(self, name):
        if name.strip().lower().startswith("mixed"):
            if self.powers is None:
                raise ConfigurationError("Field 'strategies': mixed strategies need a K-user sweep ('powers').")
            return name.strip().lower()
        return parse_enum(Strategy, name, "strategies")

    @property
    def is_k_user(self):
        return self.powers is not None

    def power_pairs(self):
        """
        The (p1, p2) pairs of the sweep, P2 = 1 - P1 with `p2=complement`.
        """
        if self.p2 == "complement":
            return [(p1, 1.0 - p1) for p1 in self.p1]
        return [(p1, self.p2) for p1 in self.p1]

    def extra_config(self):
        """
        The library configuration of this sweep.
        """
        if self.threads > 0:
            return {supported.N_THREADS: self.threads}
        return {}

    @classmethod
    def from_sources(cls, config_path=None, flags=None, environ=None):
        return cls(merge_settings(SWEEP_KEYS, DEFAULTS, config_path, flags, environ))
