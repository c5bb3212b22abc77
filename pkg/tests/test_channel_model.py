"""
Tests scenarios, the order-statistic densities and the seeded sampler.
"""
import math
import unittest

import numpy as np
from scipy.integrate import dblquad, quad
from scipy.stats import kstest
import torch

from nomaa.analysis import ChannelDraw, KScenario, Scenario, pdf_joint, pdf_strong, pdf_weak, sample
from nomaa.analysis.channel import chunk_plan, draw_chunk, sample_batches
from nomaa.analysis.exceptions import DomainError, ScenarioError


class TestScenario(unittest.TestCase):
    def test_derived_quantities(self):
        s = Scenario.from_db(0.1, 0.9, 10.0, 20.0)
        self.assertAlmostEqual(s.gamma, 10.0)
        self.assertAlmostEqual(s.rho, 100.0)
        self.assertAlmostEqual(s.gamma_db, 10.0)
        self.assertAlmostEqual(s.rho_db, 20.0)
        self.assertAlmostEqual(s.lambda_1, 10.0)
        self.assertAlmostEqual(s.lambda_2, 1.0 / 0.9)
        self.assertAlmostEqual(s.gamma_tilde, 120.0)
        self.assertAlmostEqual(s.noma_threshold, 0.1)
        self.assertAlmostEqual(s.oma_threshold, 0.6)

    def test_invalid_scenarios(self):
        self.assertRaises(ScenarioError, Scenario, 0.9, 0.1, 10.0, 1.0)
        self.assertRaises(ScenarioError, Scenario, 0.0, 0.1, 10.0, 1.0)
        self.assertRaises(ScenarioError, Scenario, 0.1, 0.9, 0.5, 1.0)
        self.assertRaises(ScenarioError, Scenario, 0.1, 0.9, 10.0, 0.0)
        self.assertRaises(ScenarioError, Scenario, 0.1, 0.9, 10.0, math.inf)

    def test_equal_powers_are_valid(self):
        s = Scenario(0.5, 0.5, 1.0, 1.0)
        self.assertEqual(s.lambda_1, s.lambda_2)

    def test_with_rho(self):
        s = Scenario(0.1, 0.9, 10.0, 1.0)
        self.assertEqual(s.with_rho(5.0), Scenario(0.1, 0.9, 10.0, 5.0))
        self.assertEqual(s.as_k_scenario().powers, (0.1, 0.9))

    def test_k_scenario(self):
        s = KScenario.from_db((0.05, 0.15, 0.8), 10.0, 0.0)
        self.assertEqual(s.n_users, 3)
        self.assertRaises(ScenarioError, KScenario, (0.1,), 10.0, 1.0)
        self.assertRaises(ScenarioError, KScenario, (0.5, 0.1, 0.4), 10.0, 1.0)
        self.assertRaises(ScenarioError, KScenario, (0.1, 0.9), 10.0, -1.0)

    def test_channel_draw(self):
        draw = ChannelDraw((0.2, 1.5))
        self.assertEqual((draw.xa, draw.xb), (0.2, 1.5))
        self.assertRaises(DomainError, ChannelDraw, (1.5, 0.2))
        self.assertRaises(DomainError, ChannelDraw, (-0.1, 0.2))
        self.assertRaises(DomainError, ChannelDraw, (0.2,))


class TestDensities(unittest.TestCase):
    def setUp(self):
        self.s = Scenario(0.1, 0.9, 10.0, 1.0)

    def test_marginals_integrate_to_one(self):
        self.assertAlmostEqual(quad(lambda x: pdf_weak(self.s, x), 0.0, np.inf)[0], 1.0, places=9)
        self.assertAlmostEqual(quad(lambda x: pdf_strong(self.s, x), 0.0, np.inf)[0], 1.0, places=9)

    def test_joint_integrates_to_one(self):
        # Inner variable xb in [xa, 40], outer xa in [0, 40].
        total = dblquad(lambda xb, xa: pdf_joint(self.s, xa, xb), 0.0, 40.0, lambda xa: xa, lambda xa: 40.0)[0]
        self.assertAlmostEqual(total, 1.0, places=7)

    def test_joint_marginal(self):
        xa = 0.05
        marginal = quad(lambda xb: pdf_joint(self.s, xa, xb), xa, np.inf)[0]
        self.assertAlmostEqual(marginal, pdf_weak(self.s, xa), places=9)

    def test_vectorised(self):
        x = np.array([0.0, 0.1, 1.0])
        self.assertEqual(pdf_weak(self.s, x).shape, (3,))
        self.assertAlmostEqual(pdf_strong(self.s, 0.0), 0.0)

    def test_domain(self):
        self.assertRaises(DomainError, pdf_weak, self.s, -1.0)
        self.assertRaises(DomainError, pdf_strong, self.s, np.array([1.0, -1.0]))
        self.assertRaises(DomainError, pdf_joint, self.s, 2.0, 1.0)


class TestSampler(unittest.TestCase):
    def setUp(self):
        self.s = Scenario(0.1, 0.9, 10.0, 1.0)

    def test_chunk_plan(self):
        self.assertEqual(chunk_plan(10, 4), [(0, 4), (1, 4), (2, 2)])
        self.assertEqual(chunk_plan(8, 4), [(0, 4), (1, 4)])

    def test_deterministic(self):
        first = list(sample(self.s, 1000, seed=3, chunk_size=256))
        second = list(sample(self.s, 1000, seed=3, chunk_size=256))
        other = list(sample(self.s, 1000, seed=4, chunk_size=256))
        self.assertEqual(first, second)
        self.assertNotEqual(first, other)

    def test_draws_are_ordered(self):
        draws = list(sample(self.s, 1000, seed=0))
        self.assertEqual(len(draws), 1000)
        self.assertTrue(all(d.xa <= d.xb for d in draws))

    def test_chunks_do_not_depend_on_each_other(self):
        chunk = draw_chunk(self.s.powers, 128, 7, 1)
        draws = list(sample(self.s, 256, seed=7, chunk_size=128))
        self.assertEqual([d.x for d in draws[128:]], [tuple(row) for row in chunk.tolist()])

    def test_unordered_means(self):
        n = 200000
        x = np.array(list(sample(self.s, n, seed=1, ordered=False)))
        for k, p in enumerate(self.s.powers):
            # An exponential has standard deviation equal to its mean.
            self.assertLess(abs(x[:, k].mean() - p), 4.0 * p / math.sqrt(n))

    def test_weak_mean(self):
        n = 200000
        xa = np.array([d.xa for d in sample(self.s, n, seed=2)])
        expected = 1.0 / self.s.lambda_sum
        self.assertLess(abs(xa.mean() - expected), 4.0 * expected / math.sqrt(n))

    def test_k_user_draws(self):
        s = KScenario((0.05, 0.15, 0.8), 10.0, 1.0)
        draws = list(sample(s, 100, seed=0))
        self.assertTrue(all(len(d.x) == 3 and list(d.x) == sorted(d.x) for d in draws))



def _cdf_weak(s, x):
    return -np.expm1(-s.lambda_sum * x)


def _cdf_strong(s, x):
    return np.expm1(-s.lambda_1 * x) * np.expm1(-s.lambda_2 * x)


class TestSampledDistribution(unittest.TestCase):
    """
    The sampled weak and strong powers follow `pdf_weak` and `pdf_strong`.
    """

    n = 4000000
    scenarios = (Scenario(0.1, 0.9, 10.0, 1.0), Scenario(0.5, 0.5, 10.0, 1.0))

    def _draws(self, s, seed):
        x = torch.cat(list(sample_batches(s, self.n, seed))).numpy()
        return x[:, 0], x[:, 1]

    def test_cdfs_integrate_the_densities(self):
        for s in self.scenarios:
            for x in (0.05, 0.5, 2.0):
                self.assertAlmostEqual(quad(lambda t: pdf_weak(s, t), 0.0, x)[0], _cdf_weak(s, x), places=10)
                self.assertAlmostEqual(quad(lambda t: pdf_strong(s, t), 0.0, x)[0], _cdf_strong(s, x), places=10)

    def test_kolmogorov_smirnov(self):
        for seed, s in enumerate(self.scenarios):
            xa, xb = self._draws(s, seed)
            self.assertLess(kstest(xa, lambda x: _cdf_weak(s, x)).statistic, 1e-3, s)
            self.assertLess(kstest(xb, lambda x: _cdf_strong(s, x)).statistic, 1e-3, s)

    def test_histograms(self):
        for seed, s in enumerate(self.scenarios):
            xa, xb = self._draws(s, seed + 10)
            edges = np.linspace(0.0, 5.0 * max(s.powers), 201)
            for values, cdf in ((xa, _cdf_weak), (xb, _cdf_strong)):
                observed = np.histogram(values, bins=edges)[0]
                expected = self.n * np.diff(cdf(s, edges))
                # Bins also hold Poisson noise of sqrt(expected) draws.
                keep = expected > 1000
                tolerance = np.maximum(0.01 * expected[keep], 5.0 * np.sqrt(expected[keep]))
                self.assertTrue(np.all(np.abs(observed[keep] - expected[keep]) <= tolerance), s)
                self.assertGreater(keep.sum(), 20)


if __name__ == "__main__":
    unittest.main()
