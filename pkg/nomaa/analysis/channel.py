# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Scenarios, the order statistics of Rayleigh-faded received powers, and the seeded channel sampler.

User i receives x_i = P_i |h_i|^2 with |h_i|^2 unit-mean exponential, i.e. x_i is exponential with rate
lambda_i = 1 / P_i. Per draw the users are ordered: the weak user A has x_A = min(x) and the strong user B
has x_B = max(x).
"""
import logging
import math

import numpy as np
import torch

from ._utils import db_to_linear, linear_to_db
from .exceptions import DomainError, ScenarioError

logger = logging.getLogger(__name__)


class Scenario:
    """
    Large-scale parameters of the two-user uplink. All values are linear.
    """

    def __init__(self, p1, p2, gamma, rho):
        """
        Args:
            p1: Average received power of user 1
            p2: Average received power of user 2, p2 >= p1
            gamma: Minimum SINR, >= 1
            rho: Average SNR 1 / N0, > 0
        """
        p1, p2, gamma, rho = float(p1), float(p2), float(gamma), float(rho)
        if not (p1 > 0 and p2 > 0 and math.isfinite(p1) and math.isfinite(p2)):
            raise ScenarioError("Powers must be positive and finite, got p1={}, p2={}.".format(p1, p2))
        if p2 < p1:
            raise ScenarioError("Users must be ordered by average power (p2 >= p1), got p1={}, p2={}.".format(p1, p2))
        if not gamma >= 1 or not math.isfinite(gamma):
            raise ScenarioError("gamma must be >= 1, got {}.".format(gamma))
        if not rho > 0 or not math.isfinite(rho):
            raise ScenarioError("rho must be positive and finite, got {}.".format(rho))
        self.p1 = p1
        self.p2 = p2
        self.gamma = gamma
        self.rho = rho
        self.lambda_1 = 1.0 / p1
        self.lambda_2 = 1.0 / p2
        self.gamma_tilde = 2.0 * gamma + gamma * gamma

    @classmethod
    def from_db(cls, p1, p2, gamma_db, rho_db):
        return cls(p1, p2, db_to_linear(gamma_db), db_to_linear(rho_db))

    @property
    def gamma_db(self):
        return float(linear_to_db(self.gamma))

    @property
    def rho_db(self):
        return float(linear_to_db(self.rho))

    @property
    def lambda_sum(self):
        return self.lambda_1 + self.lambda_2

    @property
    def noma_threshold(self):
        """gamma / rho: the received power a user needs to be decodable without interference."""
        return self.gamma / self.rho

    @property
    def oma_threshold(self):
        """gamma_tilde / (2 rho): the received power a user needs in its OMA slot."""
        return self.gamma_tilde / (2.0 * self.rho)

    @property
    def powers(self):
        return (self.p1, self.p2)

    def pairs(self):
        """
        The two (lambda_i, lambda_j) orderings every closed form sums over.
        """
        return ((self.lambda_1, self.lambda_2), (self.lambda_2, self.lambda_1))

    def with_rho(self, rho):
        return Scenario(self.p1, self.p2, self.gamma, rho)

    def as_k_scenario(self):
        return KScenario(self.powers, self.gamma, self.rho)

    def __eq__(self, other):
        return isinstance(other, Scenario) and (self.p1, self.p2, self.gamma, self.rho) == (
            other.p1,
            other.p2,
            other.gamma,
            other.rho,
        )

    def __hash__(self):
        return hash((self.p1, self.p2, self.gamma, self.rho))

    def __repr__(self):
        return "Scenario(p1={}, p2={}, gamma={}, rho={})".format(self.p1, self.p2, self.gamma, self.rho)


class KScenario:
    """
    Large-scale parameters of a K-user uplink (Monte Carlo only).
    """

    def __init__(self, powers, gamma, rho):
        powers = tuple(float(p) for p in powers)
        if len(powers) < 2:
            raise ScenarioError("A KScenario needs at least two users, got {}.".format(len(powers)))
        if not all(p > 0 and math.isfinite(p) for p in powers):
            raise ScenarioError("Powers must be positive and finite, got {}.".format(powers))
        if any(b < a for a, b in zip(powers, powers[1:])):
            raise ScenarioError("Powers must be ascending, got {}.".format(powers))
        if not float(gamma) >= 1:
            raise ScenarioError("gamma must be >= 1, got {}.".format(gamma))
        if not float(rho) > 0:
            raise ScenarioError("rho must be positive, got {}.".format(rho))
        self.powers = powers
        self.gamma = float(gamma)
        self.rho = float(rho)

    @classmethod
    def from_db(cls, powers, gamma_db, rho_db):
        return cls(powers, db_to_linear(gamma_db), db_to_linear(rho_db))

    @property
    def n_users(self):
        return len(self.powers)

    def with_rho(self, rho):
        return KScenario(self.powers, self.gamma, rho)

    def __repr__(self):
        return "KScenario(powers={}, gamma={}, rho={})".format(self.powers, self.gamma, self.rho)


class ChannelDraw:
    """
    One ordered fading realization: `x[0]` is the weakest received power, `x[-1]` the strongest.
    """

    def __init__(self, x):
        x = tuple(float(v) for v in x)
        if len(x) < 2:
            raise DomainError("A draw needs at least two users, got {}.".format(x))
        if any(v < 0 for v in x) or any(b < a for a, b in zip(x, x[1:])):
            raise DomainError("A draw must be non-negative and ascending, got {}.".format(x))
        self.x = x

    @property
    def xa(self):
        return self.x[0]

    @property
    def xb(self):
        return self.x[-1]

    def __eq__(self, other):
        return isinstance(other, ChannelDraw) and self.x == other.x

    def __repr__(self):
        return "ChannelDraw(x={})".format(self.x)


def _check_nonneg(name, x):
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("{} is only defined for non-negative arguments.".format(name))
    return x


def pdf_weak(s, x):
    """
    Density of x_A = min(x_1, x_2): (lambda_1 + lambda_2) e^(-(lambda_1 + lambda_2) x).
    """
    x = _check_nonneg("pdf_weak", x)
    return (s.lambda_sum * np.exp(-s.lambda_sum * x))[()]


def pdf_strong(s, x):
    """
    Density of x_B = max(x_1, x_2).
    """
    x = _check_nonneg("pdf_strong", x)
    l1, l2 = s.lambda_1, s.lambda_2
    return (l1 * np.exp(-l1 * x) + l2 * np.exp(-l2 * x) - s.lambda_sum * np.exp(-s.lambda_sum * x))[()]


def pdf_joint(s, xa, xb):
    """
    Joint density of (x_A, x_B) on the wedge 0 <= x_A <= x_B.
    """
    xa = _check_nonneg("pdf_joint", xa)
    xb = _check_nonneg("pdf_joint", xb)
    if np.any(xa > xb):
        raise DomainError("pdf_joint is supported on xa <= xb only.")
    l1, l2 = s.lambda_1, s.lambda_2
    return (l1 * l2 * (np.exp(-(l1 * xa + l2 * xb)) + np.exp(-(l2 * xa + l1 * xb))))[()]


def chunk_plan(n, chunk_size):
    """
    Splits `n` draws into consecutive chunks of `chunk_size` (the last one possibly shorter).

    Returns:
        A list of (chunk index, chunk size)
    """
    assert n >= 1, "n must be >= 1, got {}".format(n)
    full, remainder = divmod(int(n), int(chunk_size))
    plan = [(i, int(chunk_size)) for i in range(full)]
    if remainder > 0:
        plan.append((full, remainder))
    return plan


def chunk_generator(seed, index, device="cpu"):
    """
    The torch generator of chunk `index`. Its seed is derived from (`seed`, `index`) only,
    so a chunk yields the same draws whichever worker runs it.
    """
    state = np.random.SeedSequence(int(seed), spawn_key=(int(index),)).generate_state(1, dtype=np.uint64)[0]
    generator = torch.Generator(device=device)
    generator.manual_seed(int(state))
    return generator


def draw_chunk(powers, size, seed, index, device="cpu", ordered=True):
    """
    Draws one chunk of received powers.

    Args:
        powers: The average received powers, one per user
        size: Number of draws
        seed: The base seed
        index: The chunk index
        device: The torch device
        ordered: Whether to sort every draw ascending (stable, so ties keep the user index order)

    Returns:
        A float64 tensor of shape (size, len(powers))
    """
    generator = chunk_generator(seed, index, device)
    fading = torch.empty((size, len(powers)), dtype=torch.float64, device=device).exponential_(1.0, generator=generator)
    x = fading * torch.tensor(powers, dtype=torch.float64, device=device)
    if ordered:
        x, _ = torch.sort(x, dim=1, stable=True)
    return x


def sample_batches(s, n, seed, chunk_size=1 << 18, device="cpu", ordered=True):
    """
    Yields the draws of `sample` chunk by chunk as (chunk size, K) tensors.
    """
    plan = chunk_plan(n, chunk_size)
    logger.debug("sampling %d draws in %d chunks", n, len(plan))
    for index, size in plan:
        yield draw_chunk(s.powers, size, seed, index, device, ordered)


def sample(s, n, seed, chunk_size=1 << 18, ordered=True):
    """
    Stream of `n` channel draws for a `Scenario` or a `KScenario`, deterministic for a fixed seed.

    With `ordered=False` the draws keep the user order of `s.powers` and are returned as plain tuples.
    """
    for batch in sample_batches(s, n, seed, chunk_size=chunk_size, ordered=ordered):
        for row in batch.tolist():
            yield ChannelDraw(row) if ordered else tuple(row)
