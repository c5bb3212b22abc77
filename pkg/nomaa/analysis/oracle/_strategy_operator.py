# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Base class of the tensor operators evaluating a strategy on a batch of channel draws.
"""
from abc import ABC, abstractmethod


class StrategyOperator(ABC):
    """
    Abstract class defining the basic structure for strategy implementations in nomaa.

    An operator maps a (n, K) float64 tensor of received powers to a tuple `(values, active, labels)`:
    `values` (n, K) is the per-user metric in bits/s/Hz, `active` (n, K) flags the users that are decoded
    (no CSIT) or transmit (full CSIT), and `labels` is either None or a (n,) integer tensor recording a
    per-draw categorical outcome (for instance the adaptive mode).
    """

    def __init__(self, name, n_users, ordered_input, no_csit=False, full_csit=False, n_labels=0, **kwargs):
        """
        Args:
            name: A printable name of the strategy
            n_users: The number of users K
            ordered_input: Whether the operator expects draws sorted ascending (two-user operators)
                or in user order (K-user operators)
            no_csit: Whether the operator implements fixed-rate transmission with outage
            full_csit: Whether the operator implements on/off transmission at the instantaneous capacity
            n_labels: The number of distinct labels, 0 if the operator returns no labels
            kwargs: Other keyword arguments.
        """
        super().__init__()
        assert no_csit != full_csit, "an operator is either no-CSIT or full-CSIT"
        self.name = name
        self.n_users = n_users
        self.ordered_input = ordered_input
        self.no_csit = no_csit
        self.full_csit = full_csit
        self.n_labels = n_labels

    @abstractmethod
    def forward(self, x):
        """
        Evaluates the strategy on a batch of draws.

        Args:
            x: A (n, K) float64 tensor of received powers

        Returns:
            The tuple (values, active, labels)
        """
        pass
