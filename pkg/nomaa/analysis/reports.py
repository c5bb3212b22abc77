# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Result containers returned by the analysis functions.
"""
import math

from .supported import Provenance, Strategy, active_flags


class ThroughputReport:
    """
    Per-user and sum throughput (bits/s/Hz) of a no-CSIT strategy.
    """

    def __init__(self, t_weak, t_strong, strategy, provenance=Provenance.closed_form):
        """
        Args:
            t_weak: Throughput of the weak user
            t_strong: Throughput of the strong user
            strategy: The `Strategy` the throughputs refer to
            provenance: The `Provenance` of the values
        """
        assert t_weak >= 0 and t_strong >= 0, "throughputs must be non-negative, got {} and {}".format(t_weak, t_strong)
        self.t_weak = float(t_weak)
        self.t_strong = float(t_strong)
        self.t_sum = self.t_weak + self.t_strong
        self.strategy = strategy
        self.provenance = provenance

    def __repr__(self):
        return "ThroughputReport(weak={:.6g}, strong={:.6g}, sum={:.6g}, strategy={})".format(
            self.t_weak, self.t_strong, self.t_sum, self.strategy.name
        )


class RateReport:
    """
    Per-user and sum average data rate (bits/s/Hz) of a full-CSIT strategy.
    """

    def __init__(self, r_weak, r_strong, strategy, provenance=Provenance.closed_form):
        assert math.isfinite(r_weak) and math.isfinite(r_strong), "rates must be finite"
        assert r_weak >= 0 and r_strong >= 0, "rates must be non-negative, got {} and {}".format(r_weak, r_strong)
        self.r_weak = float(r_weak)
        self.r_strong = float(r_strong)
        self.r_sum = self.r_weak + self.r_strong
        self.strategy = strategy
        self.provenance = provenance

    def __repr__(self):
        return "RateReport(weak={:.6g}, strong={:.6g}, sum={:.6g}, strategy={}, provenance={})".format(
            self.r_weak, self.r_strong, self.r_sum, self.strategy.name, self.provenance.name
        )


class StrategyDecision:
    """
    The outcome of a strategy selection.

    Full-CSIT decisions carry the `Mode` chosen for one channel draw; the active flags follow from it.
    No-CSIT decisions carry the selected `Strategy` and `mode` is None.
    """

    def __init__(self, mode=None, strategy=None):
        assert mode is not None or strategy is not None, "a decision needs a mode or a strategy"
        self.mode = mode
        if mode is not None:
            self.active_weak, self.active_strong = active_flags(mode)
            if strategy is None:
                strategy = Strategy.noma_a
        else:
            self.active_weak = self.active_strong = True
        self.strategy = strategy

    def __eq__(self, other):
        return isinstance(other, StrategyDecision) and self.mode == other.mode and self.strategy == other.strategy

    def __repr__(self):
        if self.mode is None:
            return "StrategyDecision(strategy={})".format(self.strategy.name)
        return "StrategyDecision(mode={}, active_weak={}, active_strong={})".format(
            self.mode.name, self.active_weak, self.active_strong
        )


class AsymptoteReport:
    """
    High-SNR behaviour of a rate: rate ~ slope * ln(rho) + intercept, in bits/s/Hz.

    `slope` is expressed in bits per unit of ln(rho) (1/log(2) means one bit per doubling of rho).
    For a rate with zero slope `intercept` is its finite asymptote.
    """

    def __init__(self, slope, intercept, strategy, target, fitted=False):
        assert fitted or slope >= -1e-12, "slope must be non-negative, got {}".format(slope)
        self.slope = float(slope) if fitted else max(float(slope), 0.0)
        self.intercept = float(intercept)
        self.strategy = strategy
        self.target = target
        self.fitted = fitted

    @property
    def bits_per_doubling(self):
        return self.slope * math.log(2.0)

    def __call__(self, rho):
        """
        Evaluates the asymptote at a linear SNR.
        """
        return self.slope * math.log(rho) + self.intercept

    def __repr__(self):
        return "AsymptoteReport(slope={:.6g}, intercept={:.6g}, strategy={}, target={}, fitted={})".format(
            self.slope, self.intercept, self.strategy.name, self.target.name, self.fitted
        )


class McEstimate:
    """
    A Monte Carlo mean with its standard error (sample std / sqrt(n)).
    """

    def __init__(self, mean, std_error, n, seed):
        assert n >= 1, "n must be >= 1"
        self.mean = float(mean)
        self.std_error = float(std_error)
        self.n = int(n)
        self.seed = seed

    def __eq__(self, other):
        return (
            isinstance(other, McEstimate)
            and self.mean == other.mean
            and self.std_error == other.std_error
            and self.n == other.n
            and self.seed == other.seed
        )

    def __repr__(self):
        return "McEstimate(mean={:.6g}, std_error={:.3g}, n={}, seed={})".format(self.mean, self.std_error, self.n, self.seed)


class MonteCarloReport:
    """
    Per-user and sum Monte Carlo estimates of one strategy.

    `per_user` follows the user identities (1..K by ascending average power); `per_rank` follows the per-draw order
    (weakest instantaneous received power first). Two-user strategies are defined on the ordered pair, so for them
    both lists hold the weak user A and the strong user B.
    """

    def __init__(self, per_user, total, strategy, activity=None, per_rank=None, mode_frequencies=None, chosen=None):
        """
        Args:
            per_user: List of `McEstimate`, one per user
            total: `McEstimate` of the per-draw sum over users
            strategy: The evaluated strategy (a `Strategy` or a `MixedStrategy`)
            activity: `McEstimate` of the probability that every user is decoded (no CSIT) or active (full CSIT)
            per_rank: List of `McEstimate`, one per rank, `per_user` if None
            mode_frequencies: Dictionary mode -> frequency for the adaptive full-CSIT strategies
                (keys are `Mode`s for two users and `MixedStrategy`s for K users)
            chosen: For adaptive no-CSIT strategies, the strategy selected by the large-scale decision
        """
        self.per_user = per_user
        self.per_rank = per_user if per_rank is None else per_rank
        self.total = total
        self.strategy = strategy
        self.activity = activity
        self.mode_frequencies = mode_frequencies
        self.chosen = chosen

    @property
    def weak(self):
        return self.per_rank[0]

    @property
    def strong(self):
        return self.per_rank[-1]

    def __eq__(self, other):
        return (
            isinstance(other, MonteCarloReport)
            and self.per_user == other.per_user
            and self.per_rank == other.per_rank
            and self.total == other.total
            and self.activity == other.activity
        )

    def __repr__(self):
        return "MonteCarloReport(per_user={}, total={}, activity={})".format(self.per_user, self.total, self.activity)
