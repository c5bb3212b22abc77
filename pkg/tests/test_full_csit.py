"""
Tests the full-CSIT closed forms: average rates, the adaptive per-draw decision, activity and high-SNR asymptotes.
"""
import math
import unittest

import numpy as np

from nomaa.analysis import Mode, Provenance, Scenario, Strategy, Target, full_csit, kernels, supported
from nomaa.analysis.exceptions import ConfigurationError, DomainError

REFERENCE = (0.1, 0.9, 10.0)

_STRATEGIES = (Strategy.noma, Strategy.oma, Strategy.noma_a)


def _grid():
    for p1 in (0.05, 0.2, 0.5):
        for gamma in (1.0, 3.0, 10.0, 100.0):
            for rho in (0.1, 10.0, 1e3, 1e6):
                yield Scenario(p1, 1.0 - p1, gamma, rho)


class TestRates(unittest.TestCase):
    def test_noma_weak_rate(self):
        s = Scenario.from_db(*REFERENCE, 20.0)
        expected = s.lambda_sum * kernels.alpha(s.gamma, s.lambda_sum, s.rho) / math.log(2.0)
        self.assertAlmostEqual(full_csit.rate_noma_weak(s), expected, places=14)

    def test_noma_strong_rate_is_the_sum_of_its_parts(self):
        s = Scenario.from_db(*REFERENCE, 20.0)
        self.assertEqual(full_csit.rate_noma_strong(s), full_csit.j_b_inactive(s) + full_csit.j_b_active(s))

    def test_orderings(self):
        for s in _grid():
            noma, oma, adaptive = (full_csit.rate_report(s, strategy) for strategy in _STRATEGIES)
            self.assertGreaterEqual(noma.r_weak - adaptive.r_weak, -1e-9, s)
            self.assertGreaterEqual(adaptive.r_weak - oma.r_weak, -1e-9, s)
            self.assertGreaterEqual(adaptive.r_strong - noma.r_strong, -1e-9, s)

    def test_rates_are_non_negative_and_finite(self):
        for s in _grid():
            for strategy in _STRATEGIES:
                report = full_csit.rate_report(s, strategy)
                self.assertTrue(math.isfinite(report.r_sum))
                self.assertGreaterEqual(report.r_weak, 0.0)
                self.assertGreaterEqual(report.r_strong, 0.0)
                self.assertEqual(report.provenance, Provenance.closed_form)

    def test_equal_powers_are_continuous(self):
        equal = Scenario(0.5, 0.5, 10.0, 100.0)
        near = Scenario(0.5 * (1.0 - 1e-5), 0.5, 10.0, 100.0)
        for strategy in _STRATEGIES:
            np.testing.assert_allclose(
                full_csit.rate_report(equal, strategy).r_sum, full_csit.rate_report(near, strategy).r_sum, rtol=1e-4
            )

    def test_rate_of(self):
        s = Scenario.from_db(*REFERENCE, 30.0)
        report = full_csit.rate_report(s, "noma-a")
        self.assertEqual(full_csit.rate_of(s, Strategy.noma_a, Target.sum), report.r_sum)
        self.assertEqual(full_csit.rate_of(s, Strategy.noma_a, "strong"), report.r_strong)
        self.assertRaises(ConfigurationError, full_csit.rate_report, s, "tdma")


class TestDecision(unittest.TestCase):
    def setUp(self):
        # gamma / rho = 1 and gamma_tilde / (2 rho) = 6.
        self.s = Scenario(0.1, 0.9, 10.0, 10.0)

    def test_modes(self):
        cases = [
            ((2.0, 100.0), Mode.noma_both, (True, True)),
            ((0.5, 2.0), Mode.strong_only_free, (False, True)),
            ((0.5, 0.8), Mode.none, (False, False)),
            ((7.0, 8.0), Mode.oma_both, (True, True)),
            ((2.0, 3.0), Mode.strong_only_fallback, (False, True)),
        ]
        for draw, mode, flags in cases:
            decision = full_csit.decide_noma_a(self.s, draw)
            self.assertEqual(decision.mode, mode, draw)
            self.assertEqual((decision.active_weak, decision.active_strong), flags, draw)
            self.assertEqual(decision.strategy, Strategy.noma_a)

    def test_boundaries_are_inclusive(self):
        # x_A = gamma / rho and x_B = (gamma / rho)(1 + rho x_A) exactly.
        self.assertEqual(full_csit.decide_noma_a(self.s, (1.0, 11.0)).mode, Mode.noma_both)

    def test_invalid_draws(self):
        self.assertRaises(DomainError, full_csit.decide_noma_a, self.s, (3.0, 2.0))
        self.assertRaises(ConfigurationError, full_csit.decide_noma_a, self.s, (1.0, 2.0, 3.0))

    def test_exactly_one_mode(self):
        rng = np.random.default_rng(0)
        s = Scenario.from_db(*REFERENCE, 15.0)
        k, kt = s.noma_threshold, s.oma_threshold
        for xa, xb in np.sort(rng.exponential(1.0, (2000, 2)) * np.array(s.powers), axis=1):
            mode = full_csit.decide_noma_a(s, (xa, xb)).mode
            noma = xa >= k and xb >= k * (1.0 + s.rho * xa)
            if mode == Mode.noma_both:
                self.assertTrue(noma)
            elif mode == Mode.oma_both:
                self.assertTrue(not noma and xa >= kt and xb >= kt)
            elif mode in (Mode.strong_only_free, Mode.strong_only_fallback):
                self.assertTrue(not noma and xb >= k and xa < kt)
            else:
                self.assertEqual(mode, Mode.none)
                self.assertTrue(xb < k)


class TestActivity(unittest.TestCase):
    def test_adaptive_activates_more(self):
        for s in _grid():
            noma = full_csit.activity_probability(s, Strategy.noma)
            oma = full_csit.activity_probability(s, Strategy.oma)
            adaptive = full_csit.activity_probability(s, Strategy.noma_a)
            self.assertGreaterEqual(adaptive - max(noma, oma), -1e-12, s)
            self.assertLessEqual(adaptive, 1.0)


class TestAsymptotics(unittest.TestCase):
    def setUp(self):
        self.s = Scenario.from_db(*REFERENCE, 0.0)

    def test_slopes(self):
        bit = 1.0 / math.log(2.0)
        m = full_csit.m_gamma(self.s)
        expected = {
            (Strategy.noma, Target.weak): bit,
            (Strategy.noma, Target.strong): 0.0,
            (Strategy.oma, Target.weak): 0.5 * bit,
            (Strategy.oma, Target.strong): 0.5 * bit,
            (Strategy.noma_a, Target.weak): 0.5 * (1.0 + m) * bit,
            (Strategy.noma_a, Target.strong): 0.5 * (1.0 - m) * bit,
        }
        for (strategy, target), slope in expected.items():
            self.assertAlmostEqual(full_csit.asymptotics(self.s, strategy, target).slope, slope, places=12)
        for strategy in _STRATEGIES:
            self.assertAlmostEqual(full_csit.asymptotics(self.s, strategy, Target.sum).bits_per_doubling, 1.0, places=12)

    def test_fitted_slopes_match(self):
        for strategy in _STRATEGIES:
            for target in (Target.weak, Target.strong, Target.sum):
                analytic = full_csit.asymptotics(self.s, strategy, target)
                fitted = full_csit.fit_asymptote(self.s, strategy, target)
                self.assertTrue(fitted.fitted)
                scale = analytic.slope if analytic.slope > 0 else 1.0 / math.log(2.0)
                self.assertLess(abs(fitted.slope - analytic.slope) / scale, 0.01, (strategy, target))

    def test_intercepts_match_the_rates(self):
        rho = 1e7
        for strategy in _STRATEGIES:
            for target in (Target.weak, Target.strong):
                asymptote = full_csit.asymptotics(self.s, strategy, target)
                rate = full_csit.rate_of(self.s.with_rho(rho), strategy, target)
                self.assertLess(abs(asymptote(rho) - rate), 1e-3 * max(rate, 1.0), (strategy, target))

    def test_strong_noma_limit(self):
        limit = full_csit.asymptotics(self.s, Strategy.noma, Target.strong).intercept
        value = full_csit.rate_noma_strong(self.s.with_rho(1e8))
        self.assertLess(abs(value - limit) / limit, 0.005)

    def test_strong_noma_limit_at_equal_powers(self):
        s = Scenario(0.5, 0.5, 10.0, 1.0)
        expected = 2.0 / math.log(2.0) * (math.log(11.0) + 1.0) / 11.0
        self.assertAlmostEqual(full_csit.asymptotics(s, Strategy.noma, Target.strong).intercept, expected, places=12)
        self.assertGreater(expected, 0.0)


class TestExtraConfig(unittest.TestCase):
    near = Scenario(0.45, 0.55, 10.0, 10.0)

    def test_equal_power_tol_reaches_the_rates(self):
        default = full_csit.rate_report(self.near, Strategy.noma)
        expanded = full_csit.rate_report(self.near, Strategy.noma, {supported.EQUAL_POWER_TOL: 0.5})
        self.assertEqual(default.r_weak, expanded.r_weak)
        self.assertNotEqual(default.r_strong, expanded.r_strong)
        np.testing.assert_allclose(expanded.r_strong, default.r_strong, rtol=1e-2)
        adaptive = full_csit.rate_report(self.near, Strategy.noma_a, {supported.EQUAL_POWER_TOL: 0.5})
        self.assertNotEqual(adaptive.r_strong, full_csit.rate_report(self.near, Strategy.noma_a).r_strong)

    def test_equal_power_tol_reaches_the_asymptotes(self):
        default = full_csit.asymptotics(self.near, Strategy.noma, Target.strong)
        expanded = full_csit.asymptotics(self.near, Strategy.noma, Target.strong, {supported.EQUAL_POWER_TOL: 0.5})
        self.assertNotEqual(default.intercept, expanded.intercept)
        np.testing.assert_allclose(expanded.intercept, default.intercept, rtol=1e-2)

    def test_kernel_settings(self):
        s = Scenario.from_db(*REFERENCE, 20.0)
        config = {supported.SERIES_CUTOFF: 3.0, supported.MAX_TERMS: 300, supported.REL_TOL: 1e-13}
        for strategy in _STRATEGIES:
            np.testing.assert_allclose(
                full_csit.rate_report(s, strategy, config).r_sum, full_csit.rate_report(s, strategy).r_sum, rtol=1e-10
            )
        policy = kernels.eval_policy(config)
        self.assertEqual(policy.series_cutoff, 3.0)
        self.assertIs(kernels.eval_policy(policy), policy)
        self.assertIs(kernels.eval_policy(None), kernels.DEFAULT_POLICY)

    def test_invalid_settings(self):
        self.assertRaises(ConfigurationError, full_csit.rate_report, self.near, Strategy.oma, {supported.REL_TOL: 0.1})
        self.assertRaises(ConfigurationError, full_csit.rate_noma_weak, self.near, {"cutoff": 2.0})
        config = {supported.EQUAL_POWER_TOL: 1.0}
        self.assertRaises(ConfigurationError, full_csit.asymptotics, self.near, "noma", "sum", config)


if __name__ == "__main__":
    unittest.main()
