# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

from concurrent.futures import ThreadPoolExecutor
import logging

import numpy as np
import torch

from .. import supported
from ..channel import chunk_plan, draw_chunk

logger = logging.getLogger(__name__)


class ChunkTotals:
    """
    Running sums of the per-draw statistics of a Monte Carlo run.

    Columns are: the K per-user values, the K values by ascending received power, the per-draw sum and
    the indicator that every user is active.
    """

    def __init__(self, n_users, n_labels):
        self.n_users = n_users
        self.n = 0
        self.sums = np.zeros(2 * n_users + 2)
        self.squares = np.zeros(2 * n_users + 2)
        self.label_counts = np.zeros(n_labels, dtype=np.int64)

    def add(self, n, sums, squares, label_counts):
        self.n += n
        self.sums = self.sums + sums
        self.squares = self.squares + squares
        if label_counts is not None:
            self.label_counts = self.label_counts + label_counts

    @property
    def means(self):
        return self.sums / self.n

    @property
    def std_errors(self):
        """
        Sample standard deviation over sqrt(n) for every column.
        """
        if self.n < 2:
            return np.zeros_like(self.sums)
        variance = np.maximum((self.squares - self.n * self.means ** 2) / (self.n - 1), 0.0)
        return np.sqrt(variance / self.n)

    def column(self, index):
        return self.means[index], self.std_errors[index]


class Executor(torch.nn.Module, object):
    """
    Executor class running one strategy operator over seeded chunks of channel draws.
    """

    def __init__(self, operator, powers, extra_config):
        """
        Args:
            operator: A `StrategyOperator` (also a `torch.nn.Module`)
            powers: The average received powers, ascending
            extra_config: A resolved configuration dictionary (see `nomaa.analysis.supported`)
        """
        super(Executor, self).__init__()
        assert operator.n_users == len(powers), "operator expects {} users, got {} powers".format(
            operator.n_users, len(powers)
        )

        self._operator = operator
        self.powers = tuple(powers)
        self.n_users = len(powers)
        self.chunk_size = extra_config[supported.CHUNK_SIZE]
        self.n_threads = extra_config[supported.N_THREADS]
        self.device = extra_config[supported.DEVICE]

    def forward(self, x):
        """
        Evaluates the operator on one chunk and returns its partial sums as numpy arrays.
        """
        with torch.no_grad():
            values, active, labels = self._operator(x)
            if self._operator.ordered_input:
                by_rank = values
            else:
                _, order = torch.sort(x, dim=1, stable=True)
                by_rank = values.gather(1, order)
            total = values.sum(dim=1, keepdim=True)
            all_active = active.all(dim=1, keepdim=True).to(values.dtype)
            stats = torch.cat([values, by_rank, total, all_active], dim=1)

            # Columns contiguous so that numpy reduces each of them pairwise.
            stats = np.ascontiguousarray(stats.cpu().numpy().T)
            sums = np.sum(stats, axis=1)
            squares = np.sum(stats * stats, axis=1)
            label_counts = None
            if labels is not None:
                label_counts = np.bincount(labels.cpu().numpy(), minlength=self._operator.n_labels)
            return x.shape[0], sums, squares, label_counts

    def _run_chunk(self, seed, index, size):
        x = draw_chunk(self.powers, size, seed, index, self.device, ordered=self._operator.ordered_input)
        return self(x)

    def run(self, n, seed):
        """
        Evaluates the operator on `n` draws.

        Chunks are drawn and evaluated concurrently, but the partial sums are reduced in chunk order,
        so the result only depends on (`n`, `seed`, the chunk size).

        Returns:
            A `ChunkTotals`
        """
        plan = chunk_plan(n, self.chunk_size)
        logger.debug("running %s on %d draws, %d chunks, %d threads", self._operator.name, n, len(plan), self.n_threads)
        totals = ChunkTotals(self.n_users, self._operator.n_labels)
        with ThreadPoolExecutor(max_workers=self.n_threads) as pool:
            for result in pool.map(lambda item: self._run_chunk(seed, *item), plan):
                totals.add(*result)
        return totals
