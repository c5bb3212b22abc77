# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
K-user strategies mixing one NOMA group with OMA users.

A cycle has K slots and every user spends the energy of K slots at its nominal power. The NOMA group of size g
shares g slots at K / g times the power; each OMA user owns one slot at K times the power. A user active in n of
the K slots must carry K / n times the information of a NOMA slot, so its SINR threshold is (1 + gamma)^(K / n) - 1.
"""
from itertools import combinations
import math

from ..exceptions import ConfigurationError


def sinr_threshold(gamma, n_slots, n_users):
    """
    SINR needed in each of `n_slots` active slots (out of `n_users`) to carry the information of log2(1 + gamma) per slot.
    """
    if n_users % n_slots == 0:
        # Integer duty cycles expand (1 + gamma)^d - 1 term by term: d = 2 gives exactly 2 gamma + gamma^2.
        duty = n_users // n_slots
        threshold = 0.0
        power = 1.0
        for n in range(1, duty + 1):
            power = power * gamma
            threshold = threshold + math.comb(duty, n) * power
        return threshold
    return math.expm1(n_users / n_slots * math.log1p(gamma))


class MixedStrategy:
    """
    A partition of the users (numbered 1..K by ascending average power) into one NOMA group and OMA users.
    """

    def __init__(self, noma_set, oma_set):
        """
        Args:
            noma_set: The users sharing slots in NOMA
            oma_set: The users transmitting alone in their own slot
        """
        noma = set(int(u) for u in noma_set)
        oma = set(int(u) for u in oma_set)
        if noma & oma:
            raise ConfigurationError("Users {} are both in the NOMA and in the OMA set.".format(sorted(noma & oma)))
        n_users = len(noma) + len(oma)
        if n_users < 2 or noma | oma != set(range(1, n_users + 1)):
            raise ConfigurationError(
                "NOMA set {} and OMA set {} must cover users 1..K exactly.".format(sorted(noma), sorted(oma))
            )
        if len(noma) == 1:
            # A NOMA group of one is an OMA user.
            oma |= noma
            noma = set()
        self.noma_set = tuple(sorted(noma))
        self.oma_set = tuple(sorted(oma))
        self.n_users = n_users

        slots = []
        if len(self.noma_set) > 0:
            slots.extend([self.noma_set] * len(self.noma_set))
        slots.extend((user,) for user in self.oma_set)
        self.slot_pattern = tuple(slots)
        assert len(self.slot_pattern) == n_users, "a cycle has K slots"

        for user in range(1, n_users + 1):
            energy = self.active_slots(user) * self.power_scale(user)
            assert abs(energy - n_users) < 1e-12, "user {} spends {} slot-energies instead of {}".format(user, energy, n_users)

    @classmethod
    def pure_noma(cls, n_users):
        return cls(range(1, n_users + 1), ())

    @classmethod
    def pure_oma(cls, n_users):
        return cls((), range(1, n_users + 1))

    @property
    def is_pure_noma(self):
        return len(self.oma_set) == 0

    @property
    def is_pure_oma(self):
        return len(self.noma_set) == 0

    def active_slots(self, user):
        """Number of slots of the cycle in which `user` transmits."""
        return sum(1 for slot in self.slot_pattern if user in slot)

    def power_scale(self, user):
        """Transmit power of `user` in its active slots, relative to its nominal power."""
        return self.n_users / self.active_slots(user)

    def threshold(self, user, gamma):
        return sinr_threshold(gamma, self.active_slots(user), self.n_users)

    @property
    def label(self):
        if self.is_pure_noma:
            return "noma"
        if self.is_pure_oma:
            return "oma"
        return "mixed-" + "-".join(str(u) for u in self.noma_set)

    def __eq__(self, other):
        return isinstance(other, MixedStrategy) and (self.noma_set, self.oma_set) == (other.noma_set, other.oma_set)

    def __hash__(self):
        return hash((self.noma_set, self.oma_set))

    def __repr__(self):
        return "MixedStrategy(noma_set={}, oma_set={})".format(self.noma_set, self.oma_set)


def candidate_strategies(n_users):
    """
    Every pure and mixed strategy for `n_users` users, ordered by increasing number of OMA slots.
    """
    users = range(1, n_users + 1)
    candidates = [MixedStrategy.pure_noma(n_users)]
    for size in range(n_users - 1, 1, -1):
        for group in combinations(users, size):
            candidates.append(MixedStrategy(group, [u for u in users if u not in group]))
    candidates.append(MixedStrategy.pure_oma(n_users))
    return candidates


def parse_mixed_strategy(label, n_users):
    """
    Maps "noma", "oma" or "mixed-i-j[-...]" (the NOMA group) into a `MixedStrategy`.
    """
    key = str(label).strip().lower().replace("_", "-")
    if key == "noma":
        return MixedStrategy.pure_noma(n_users)
    if key == "oma":
        return MixedStrategy.pure_oma(n_users)
    if key.startswith("mixed-"):
        try:
            group = [int(u) for u in key[len("mixed-") :].split("-")]
        except ValueError:
            raise ConfigurationError("Cannot parse the NOMA group of strategy '{}'.".format(label))
        if not all(1 <= u <= n_users for u in group):
            raise ConfigurationError("Strategy '{}' names users outside 1..{}.".format(label, n_users))
        return MixedStrategy(group, [u for u in range(1, n_users + 1) if u not in group])
    raise ConfigurationError("Unknown K-user strategy '{}'.".format(label))
