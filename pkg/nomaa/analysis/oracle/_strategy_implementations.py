# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
PyTorch implementations of the strategies evaluated by the Monte Carlo oracle.

Two-user operators take draws sorted ascending (column 0 is the weak user A, column 1 the strong user B).
K-user operators take draws in user order and sort each NOMA group per draw for SIC.
Every threshold test is written as x >= (threshold / (scale rho)) (1 + scale rho interference) so that the
two-user and the K-user implementations perform the same floating point operations.
"""
import math

import torch

from ..supported import Mode, Strategy
from ._strategy_operator import StrategyOperator
from .mixed_strategy import candidate_strategies


def _capacity(x, power_rho, interference):
    return torch.log2(1.0 + power_rho * x / (1.0 + power_rho * interference))


class TwoUserNoCsit(StrategyOperator, torch.nn.Module):
    """
    Fixed-rate NOMA or OMA for two ordered users.
    """

    def __init__(self, scenario, strategy):
        super(TwoUserNoCsit, self).__init__("{}-no-csit".format(strategy.name), 2, ordered_input=True, no_csit=True)
        assert strategy in (Strategy.noma, Strategy.oma), "only pure strategies have a per-draw rule"
        self.strategy = strategy
        self.rho = scenario.rho
        self.noma_threshold = scenario.noma_threshold
        self.oma_threshold = scenario.oma_threshold
        self.bits = math.log2(1.0 + scenario.gamma)

    def forward(self, x):
        xa, xb = x[:, 0], x[:, 1]
        if self.strategy == Strategy.noma:
            strong = xb >= self.noma_threshold * (1.0 + self.rho * xa)
            weak = strong & (xa >= self.noma_threshold * (1.0 + self.rho * torch.zeros_like(xa)))
            active = torch.stack([weak, strong], dim=1)
        else:
            active = x >= self.oma_threshold
        return active.to(x.dtype) * self.bits, active, None


class TwoUserFullCsit(StrategyOperator, torch.nn.Module):
    """
    On/off NOMA or OMA for two ordered users at their instantaneous capacity.
    """

    def __init__(self, scenario, strategy):
        super(TwoUserFullCsit, self).__init__("{}-full-csit".format(strategy.name), 2, ordered_input=True, full_csit=True)
        assert strategy in (Strategy.noma, Strategy.oma), "use TwoUserAdaptiveFullCsit for the adaptive strategy"
        self.strategy = strategy
        self.rho = scenario.rho
        self.noma_threshold = scenario.noma_threshold
        self.oma_threshold = scenario.oma_threshold

    def forward(self, x):
        xa, xb = x[:, 0], x[:, 1]
        zero = torch.zeros_like(xa)
        if self.strategy == Strategy.noma:
            weak = xa >= self.noma_threshold * (1.0 + self.rho * zero)
            interference = zero + xa * weak.to(x.dtype)
            strong = xb >= self.noma_threshold * (1.0 + self.rho * interference)
            values = torch.stack(
                [
                    torch.where(weak, 1.0 * _capacity(xa, self.rho, zero), zero),
                    torch.where(strong, 1.0 * _capacity(xb, self.rho, interference), zero),
                ],
                dim=1,
            )
            return values, torch.stack([weak, strong], dim=1), None
        power_rho = 2.0 * self.rho
        active = x >= self.oma_threshold
        values = torch.where(active, 0.5 * _capacity(x, power_rho, torch.zeros_like(x)), torch.zeros_like(x))
        return values, active, None


class TwoUserAdaptiveFullCsit(StrategyOperator, torch.nn.Module):
    """
    The per-draw adaptive strategy: NOMA when both users are active with it, otherwise a lone strong user or OMA.
    Labels are `Mode.value - 1`.
    """

    def __init__(self, scenario):
        super(TwoUserAdaptiveFullCsit, self).__init__(
            "noma_a-full-csit", 2, ordered_input=True, full_csit=True, n_labels=len(Mode)
        )
        self.rho = scenario.rho
        self.noma_threshold = scenario.noma_threshold
        self.oma_threshold = scenario.oma_threshold

    def modes(self, x):
        xa, xb = x[:, 0], x[:, 1]
        k, kt = self.noma_threshold, self.oma_threshold
        codes = torch.full(xa.shape, Mode.none.value - 1, dtype=torch.long, device=x.device)
        noma_both = (xa >= k) & (xb >= k * (1.0 + self.rho * xa))
        weak_low = xa < k
        fallback = ~noma_both & ~weak_low
        rules = [
            (fallback & (xb >= k), Mode.strong_only_fallback),
            (fallback & (xa >= kt), Mode.weak_only_free),
            (fallback & (xa >= kt) & (xb >= kt), Mode.oma_both),
            (weak_low & (xb >= k), Mode.strong_only_free),
            (noma_both, Mode.noma_both),
        ]
        # Later rules take precedence.
        for mask, mode in rules:
            codes = torch.where(mask, torch.full_like(codes, mode.value - 1), codes)
        return codes

    def forward(self, x):
        xa, xb = x[:, 0], x[:, 1]
        zero = torch.zeros_like(xa)
        codes = self.modes(x)

        def is_mode(*modes):
            mask = torch.zeros_like(codes, dtype=torch.bool)
            for mode in modes:
                mask = mask | (codes == mode.value - 1)
            return mask

        noma_both = is_mode(Mode.noma_both)
        oma_both = is_mode(Mode.oma_both)
        weak_free = is_mode(Mode.weak_only_free)
        strong_free = is_mode(Mode.strong_only_free, Mode.strong_only_fallback)

        weak_alone = _capacity(xa, self.rho, zero)
        weak = torch.where(
            noma_both | weak_free, weak_alone, torch.where(oma_both, 0.5 * _capacity(xa, 2.0 * self.rho, zero), zero)
        )
        strong_oma = torch.where(oma_both, 0.5 * _capacity(xb, 2.0 * self.rho, zero), zero)
        strong = torch.where(
            noma_both, _capacity(xb, self.rho, xa), torch.where(strong_free, _capacity(xb, self.rho, zero), strong_oma)
        )
        active = torch.stack([noma_both | oma_both | weak_free, noma_both | oma_both | strong_free], dim=1)
        return torch.stack([weak, strong], dim=1), active, codes


class KUserStrategy(StrategyOperator, torch.nn.Module):
    """
    A `MixedStrategy` for K users, no CSIT or full CSIT.

    No CSIT: the NOMA group is decoded strongest first, every weaker member interferes, and a failure
    fails every member decoded after it. Full CSIT: a member is active when its SINR, with the active weaker
    members as interference, reaches its threshold; it then transmits at its capacity scaled by its duty cycle.
    """

    def __init__(self, scenario, strategy, full_csit=False):
        super(KUserStrategy, self).__init__(
            "{}-{}".format(strategy.label, "full-csit" if full_csit else "no-csit"),
            strategy.n_users,
            ordered_input=False,
            no_csit=not full_csit,
            full_csit=full_csit,
        )
        assert strategy.n_users == len(scenario.powers), "strategy and scenario disagree on the number of users"
        self.strategy = strategy
        self.rho = scenario.rho
        self.bits = math.log2(1.0 + scenario.gamma)
        self.gamma = scenario.gamma

    def _group_parameters(self, users):
        # Every member of a group shares the duty cycle, hence the power scale and the threshold.
        user = users[0]
        power_rho = self.strategy.power_scale(user) * self.rho
        threshold = self.strategy.threshold(user, self.gamma)
        fraction = self.strategy.active_slots(user) / self.strategy.n_users
        return power_rho, threshold / power_rho, fraction

    def _evaluate_group(self, x, users):
        power_rho, level, fraction = self._group_parameters(users)
        columns = torch.tensor([u - 1 for u in users], dtype=torch.long, device=x.device)
        group = x.index_select(1, columns)
        ordered, order = torch.sort(group, dim=1, stable=True)
        size = len(users)
        zero = torch.zeros_like(ordered[:, 0])
        active = [None] * size
        values = [None] * size
        if self.no_csit:
            # Strongest first; everybody weaker interferes.
            interference = [None] * size
            interference[0] = zero
            for r in range(1, size):
                interference[r] = interference[r - 1] + ordered[:, r - 1]
            decoded = torch.ones_like(zero, dtype=torch.bool)
            for r in range(size - 1, -1, -1):
                decoded = decoded & (ordered[:, r] >= level * (1.0 + power_rho * interference[r]))
                active[r] = decoded
                values[r] = decoded.to(x.dtype) * self.bits
        else:
            # Weakest first; only active weaker users interfere.
            interference = zero
            for r in range(size):
                active[r] = ordered[:, r] >= level * (1.0 + power_rho * interference)
                values[r] = torch.where(active[r], fraction * _capacity(ordered[:, r], power_rho, interference), zero)
                interference = interference + ordered[:, r] * active[r].to(x.dtype)
        ordered_values = torch.stack(values, dim=1)
        ordered_active = torch.stack(active, dim=1)
        # Back from the per-draw order to the group's user order.
        group_values = torch.empty_like(ordered_values).scatter_(1, order, ordered_values)
        group_active = torch.empty_like(ordered_active).scatter_(1, order, ordered_active)
        return columns, group_values, group_active

    def forward(self, x):
        values = torch.zeros_like(x)
        active = torch.zeros_like(x, dtype=torch.bool)
        groups = []
        if len(self.strategy.noma_set) > 0:
            groups.append(self.strategy.noma_set)
        groups.extend((user,) for user in self.strategy.oma_set)
        for users in groups:
            columns, group_values, group_active = self._evaluate_group(x, users)
            values[:, columns] = group_values
            active[:, columns] = group_active
        return values, active, None


class KUserAdaptiveFullCsit(StrategyOperator, torch.nn.Module):
    """
    Per draw, the pure or mixed strategy activating the most users; ties go to the larger sum rate,
    then to fewer OMA slots. Labels index `candidate_strategies(K)`.
    """

    def __init__(self, scenario):
        candidates = candidate_strategies(len(scenario.powers))
        super(KUserAdaptiveFullCsit, self).__init__(
            "noma_a-full-csit", len(scenario.powers), ordered_input=False, full_csit=True, n_labels=len(candidates)
        )
        self.candidates = candidates
        self._operators = torch.nn.ModuleList([KUserStrategy(scenario, c, full_csit=True) for c in candidates])

    def forward(self, x):
        outputs = [operator(x) for operator in self._operators]
        values = torch.stack([v for v, _, _ in outputs])
        active = torch.stack([a for _, a, _ in outputs])
        counts = active.sum(dim=2)
        best_count = counts.max(dim=0).values
        sum_rate = values.sum(dim=2)
        sum_rate = torch.where(counts == best_count, sum_rate, torch.full_like(sum_rate, -math.inf))
        # argmax returns the first maximum, i.e. the candidate with fewer OMA slots.
        choice = torch.argmax(sum_rate, dim=0)
        index = choice.view(1, -1, 1).expand(1, x.shape[0], x.shape[1])
        return values.gather(0, index)[0], active.gather(0, index)[0], choice
