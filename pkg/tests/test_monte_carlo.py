"""
Tests the Monte Carlo oracle: agreement with the closed forms, determinism, and the K-user strategies.
"""
import math
import unittest

import numpy as np

from nomaa.analysis import KScenario, Mode, Scenario, Strategy, full_csit, no_csit
from nomaa.analysis import constants
from nomaa.analysis.exceptions import ConfigurationError
from nomaa.analysis.oracle import (
    MIN_SAMPLES,
    MixedStrategy,
    candidate_strategies,
    mc_rate_full_csit,
    mc_throughput,
    parse_mixed_strategy,
    sinr_threshold,
)

N = 200000
CONFIG = {constants.CHUNK_SIZE: 1 << 15, constants.N_THREADS: 2}


def _assert_within(test, estimate, expected, sigmas=4.0):
    test.assertLessEqual(abs(estimate.mean - expected), sigmas * estimate.std_error + 1e-12, (estimate, expected))


class TestTwoUsers(unittest.TestCase):
    def setUp(self):
        self.s = Scenario.from_db(0.1, 0.9, 10.0, 15.0)

    def test_throughput_matches_closed_form(self):
        for strategy in (Strategy.noma, Strategy.oma):
            closed = no_csit.throughput(self.s, strategy)
            report = mc_throughput(self.s, strategy, N, 11, CONFIG)
            _assert_within(self, report.weak, closed.t_weak)
            _assert_within(self, report.strong, closed.t_strong)
            _assert_within(self, report.total, closed.t_sum)

    def test_adaptive_throughput_uses_the_large_scale_choice(self):
        report = mc_throughput(self.s, "noma-a", N, 11, CONFIG)
        chosen = no_csit.select_no_csit(self.s).strategy
        self.assertEqual(report.chosen, chosen)
        self.assertEqual(report.total, mc_throughput(self.s, chosen, N, 11, CONFIG).total)

    def test_rates_match_closed_form(self):
        for strategy in (Strategy.noma, Strategy.oma, Strategy.noma_a):
            closed = full_csit.rate_report(self.s, strategy)
            report = mc_rate_full_csit(self.s, strategy, N, 12, CONFIG)
            _assert_within(self, report.weak, closed.r_weak)
            _assert_within(self, report.strong, closed.r_strong)
            _assert_within(self, report.activity, full_csit.activity_probability(self.s, strategy))

    def test_mode_frequencies(self):
        report = mc_rate_full_csit(self.s, Strategy.noma_a, N, 13, CONFIG)
        self.assertEqual(set(report.mode_frequencies), set(Mode))
        self.assertAlmostEqual(sum(report.mode_frequencies.values()), 1.0, places=12)
        self.assertEqual(report.mode_frequencies[Mode.weak_only_free], 0.0)
        both = report.mode_frequencies[Mode.noma_both] + report.mode_frequencies[Mode.oma_both]
        self.assertAlmostEqual(both, report.activity.mean, places=12)

    def test_modes_agree_with_the_scalar_decision(self):
        from nomaa.analysis.channel import draw_chunk
        from nomaa.analysis.oracle._strategy_implementations import TwoUserAdaptiveFullCsit

        x = draw_chunk(self.s.powers, 2000, 5, 0)
        codes = TwoUserAdaptiveFullCsit(self.s).modes(x).tolist()
        for (xa, xb), code in zip(x.tolist(), codes):
            self.assertEqual(full_csit.decide_noma_a(self.s, (xa, xb)).mode.value - 1, code)

    def test_too_few_samples(self):
        self.assertRaises(ConfigurationError, mc_throughput, self.s, Strategy.noma, MIN_SAMPLES - 1, 0)
        self.assertRaises(ConfigurationError, mc_rate_full_csit, self.s, Strategy.noma, 10, 0)

    def test_unknown_strategy(self):
        self.assertRaises(ConfigurationError, mc_throughput, self.s, "cdma", N, 0)
        self.assertRaises(ConfigurationError, mc_throughput, self.s, MixedStrategy.pure_noma(3), N, 0)


class TestDeterminism(unittest.TestCase):
    def setUp(self):
        self.s = Scenario.from_db(0.1, 0.9, 10.0, 10.0)

    def test_same_seed_same_report(self):
        first = mc_rate_full_csit(self.s, Strategy.noma_a, 50000, 3, CONFIG)
        second = mc_rate_full_csit(self.s, Strategy.noma_a, 50000, 3, CONFIG)
        self.assertEqual(first, second)
        other = mc_rate_full_csit(self.s, Strategy.noma_a, 50000, 4, CONFIG)
        self.assertNotEqual(first, other)

    def test_thread_count_does_not_matter(self):
        one = mc_throughput(self.s, Strategy.noma, 100000, 3, {constants.CHUNK_SIZE: 1 << 13, constants.N_THREADS: 1})
        many = mc_throughput(self.s, Strategy.noma, 100000, 3, {constants.CHUNK_SIZE: 1 << 13, constants.N_THREADS: 4})
        self.assertEqual(one, many)

    def test_two_user_and_k_user_paths_agree(self):
        pairs = (
            (Strategy.noma, MixedStrategy.pure_noma(2)),
            (Strategy.oma, MixedStrategy.pure_oma(2)),
        )
        for two_user, k_user in pairs:
            for run in (mc_throughput, mc_rate_full_csit):
                direct = run(self.s, two_user, 50000, 8, CONFIG)
                generic = run(self.s, k_user, 50000, 8, CONFIG)
                self.assertEqual(direct.per_rank, generic.per_rank, (two_user, run.__name__))
                self.assertEqual(direct.total, generic.total)
                self.assertEqual(direct.activity, generic.activity)

    def test_per_user_means(self):
        report = mc_rate_full_csit(self.s.as_k_scenario(), Strategy.oma, N, 9, CONFIG)
        # Per user and per rank are two orderings of the same draws.
        self.assertAlmostEqual(sum(e.mean for e in report.per_user), sum(e.mean for e in report.per_rank), places=10)
        self.assertGreater(report.per_user[1].mean, report.per_user[0].mean)


class TestMixedStrategies(unittest.TestCase):
    def test_thresholds(self):
        self.assertEqual(sinr_threshold(10.0, 2, 2), 10.0)
        self.assertEqual(sinr_threshold(10.0, 1, 2), 120.0)
        np.testing.assert_allclose(sinr_threshold(10.0, 2, 3), 11.0 ** 1.5 - 1.0, rtol=1e-14)
        self.assertEqual(sinr_threshold(10.0, 1, 3), 11.0 ** 3 - 1.0)

    def test_energy_is_conserved(self):
        for n_users in (2, 3, 4):
            for strategy in candidate_strategies(n_users):
                for user in range(1, n_users + 1):
                    energy = strategy.active_slots(user) * strategy.power_scale(user)
                    self.assertAlmostEqual(energy, n_users, places=12)
                self.assertEqual(len(strategy.slot_pattern), n_users)

    def test_candidates(self):
        candidates = candidate_strategies(3)
        self.assertEqual([c.label for c in candidates], ["noma", "mixed-1-2", "mixed-1-3", "mixed-2-3", "oma"])
        self.assertEqual(len(candidate_strategies(4)), 1 + 4 + 6 + 1)

    def test_parse(self):
        self.assertEqual(parse_mixed_strategy("mixed-2-3", 3), MixedStrategy((2, 3), (1,)))
        self.assertEqual(parse_mixed_strategy("NOMA", 3), MixedStrategy.pure_noma(3))
        self.assertRaises(ConfigurationError, parse_mixed_strategy, "mixed-a", 3)
        self.assertRaises(ConfigurationError, parse_mixed_strategy, "mixed-1-4", 3)
        self.assertRaises(ConfigurationError, MixedStrategy, (1, 2), (2, 3))

    def test_singleton_group_is_oma(self):
        self.assertEqual(MixedStrategy((1,), (2, 3)), MixedStrategy.pure_oma(3))


class TestThreeUsers(unittest.TestCase):
    def setUp(self):
        self.powers = (0.05, 0.15, 0.8)

    def test_adaptive_activates_most(self):
        s = KScenario.from_db(self.powers, 10.0, 20.0)
        adaptive = mc_rate_full_csit(s, Strategy.noma_a, 50000, 1, CONFIG)
        self.assertAlmostEqual(sum(adaptive.mode_frequencies.values()), 1.0, places=12)
        for candidate in candidate_strategies(3):
            report = mc_rate_full_csit(s, candidate, 50000, 1, CONFIG)
            self.assertGreaterEqual(adaptive.activity.mean, report.activity.mean, candidate)

    def test_no_csit_adaptive_picks_the_best_candidate(self):
        s = KScenario.from_db(self.powers, 10.0, 25.0)
        adaptive = mc_throughput(s, "noma-a", 20000, 2, CONFIG)
        best = max(mc_throughput(s, c, 20000, 2, CONFIG).total.mean for c in candidate_strategies(3))
        self.assertEqual(adaptive.total.mean, best)
        self.assertIn(adaptive.chosen, candidate_strategies(3))

    def test_extremes(self):
        low = KScenario.from_db(self.powers, 10.0, 10.0)
        high = KScenario.from_db(self.powers, 10.0, 40.0)
        noma_low = mc_throughput(low, "noma", 50000, 3, CONFIG).total.mean
        oma_low = mc_throughput(low, "oma", 50000, 3, CONFIG).total.mean
        noma_high = mc_throughput(high, "noma", 50000, 3, CONFIG).total.mean
        oma_high = mc_throughput(high, "oma", 50000, 3, CONFIG).total.mean
        self.assertGreater(noma_low, oma_low)
        self.assertGreater(oma_high, noma_high)

    def test_full_csit_noma_bound(self):
        # Every active user carries at most its interference-free capacity at full duty.
        s = KScenario.from_db(self.powers, 10.0, 20.0)
        report = mc_rate_full_csit(s, "noma", 50000, 4, CONFIG)
        for k, p in enumerate(self.powers):
            self.assertLessEqual(report.per_user[k].mean, math.log2(1.0 + s.rho * p) + 1.0)


if __name__ == "__main__":
    unittest.main()
