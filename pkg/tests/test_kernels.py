"""
Tests the special functions behind the closed forms.
"""
import math
import unittest

import numpy as np
from scipy.special import exp1

from nomaa.analysis import kernels
from nomaa.analysis.exceptions import ConfigurationError, DomainError
from nomaa.analysis.oracle import alpha_by_quadrature, e1_by_quadrature, laplace_by_quadrature


class TestExpIntegral(unittest.TestCase):
    def test_e1_matches_scipy(self):
        x = np.logspace(-6.0, math.log10(700.0), 500)
        np.testing.assert_allclose(kernels.exp_integral_e1(x), exp1(x), rtol=1e-10, atol=0)

    def test_e1_around_series_cutoff(self):
        x = np.array([0.999999, 1.0, 1.000001])
        np.testing.assert_allclose(kernels.exp_integral_e1(x), exp1(x), rtol=1e-11, atol=0)

    def test_e1_scalar_and_array_agree(self):
        x = np.array([1e-4, 0.5, 2.0, 35.0])
        scalars = [kernels.exp_integral_e1(v) for v in x]
        np.testing.assert_allclose(scalars, kernels.exp_integral_e1(x), rtol=1e-14, atol=0)
        self.assertIsInstance(kernels.exp_integral_e1(0.5), float)

    def test_e1_matches_quadrature(self):
        for x in (1e-6, 1e-2, 0.7, 3.0, 50.0):
            np.testing.assert_allclose(kernels.exp_integral_e1(x), e1_by_quadrature(x), rtol=1e-10)

    def test_e1_domain(self):
        for x in (0.0, -1.0, np.array([1.0, -2.0])):
            self.assertRaises(DomainError, kernels.exp_integral_e1, x)

    def test_scaled_e1_bounds(self):
        x = np.logspace(-6.0, 4.0, 200)
        scaled = kernels.scaled_e1(x)
        self.assertTrue(np.all(scaled > 1.0 / (x + 1.0)))
        self.assertTrue(np.all(scaled < 1.0 / x))

    def test_scaled_e1_no_overflow(self):
        # e^800 overflows, the scaled value does not.
        value = kernels.scaled_e1(800.0)
        self.assertTrue(math.isfinite(value))
        np.testing.assert_allclose(value, 1.0 / 800.0, rtol=2e-3)

    def test_policy(self):
        policy = kernels.EvalPolicy(series_cutoff=2.0, max_terms=200, rel_tol=1e-13)
        x = np.array([0.1, 1.5, 3.0])
        np.testing.assert_allclose(kernels.exp_integral_e1(x, policy), exp1(x), rtol=1e-10)
        self.assertRaises(ConfigurationError, kernels.EvalPolicy, rel_tol=1e-3)
        self.assertRaises(ConfigurationError, kernels.EvalPolicy, max_terms=5)
        self.assertRaises(ConfigurationError, kernels.EvalPolicy, series_cutoff=0.0)


class TestAlpha(unittest.TestCase):
    def test_alpha_matches_quadrature(self):
        for gamma, lam, rho in ((10.0, 11.1, 10.0), (1.0, 1.0, 1.0), (3.0, 2.0, 1000.0), (0.5, 20.0, 100.0)):
            np.testing.assert_allclose(kernels.alpha(gamma, lam, rho), alpha_by_quadrature(gamma, lam, rho), rtol=1e-9)

    def test_alpha_decreasing_in_gamma(self):
        gammas = np.linspace(0.1, 100.0, 50)
        values = [kernels.alpha(g, 2.0, 10.0) for g in gammas]
        self.assertTrue(all(a >= b for a, b in zip(values, values[1:])))

    def test_alpha_asymptote(self):
        gamma, lam, rho = 10.0, 1.1, 1e9
        np.testing.assert_allclose(kernels.alpha(gamma, lam, rho), kernels.alpha_asymptote(gamma, lam, rho), rtol=1e-5)

    def test_alpha_domain(self):
        self.assertRaises(DomainError, kernels.alpha, 0.0, 1.0, 1.0)
        self.assertRaises(DomainError, kernels.alpha, 1.0, -1.0, 1.0)
        self.assertRaises(DomainError, kernels.alpha, 1.0, 1.0, 0.0)


class TestLaplaceTransform(unittest.TestCase):
    def test_laplace_matches_quadrature(self):
        for p, a, b, s in ((1.0, 1.0, 1.0, 0.0), (0.3, 2.0, 0.1, 1.5), (9.0, 0.5, 4.0, 0.2), (2.0, 7.0, 0.01, 3.0)):
            np.testing.assert_allclose(kernels.laplace_shifted_e1(p, a, b, s), laplace_by_quadrature(p, a, b, s), rtol=1e-9)

    def test_small_p_expansion_is_continuous(self):
        a, b, s = 2.0, 0.5, 0.3
        expanded = kernels.shifted_e1_transform(0.0, 1e-9 * a, a, b, s)
        direct = kernels.shifted_e1_transform(0.0, 1e-4 * a, a, b, s)
        np.testing.assert_allclose(expanded, laplace_by_quadrature(1e-9 * a, a, b, s), rtol=1e-8)
        np.testing.assert_allclose(expanded, direct, rtol=1e-3)

    def test_expansion_threshold_follows_the_policy(self):
        p, a, b, s = 2e-3, 2.0, 0.5, 0.3
        direct = kernels.shifted_e1_transform(0.0, p, a, b, s)
        expanded = kernels.shifted_e1_transform(0.0, p, a, b, s, kernels.EvalPolicy(equal_power_tol=1e-2))
        self.assertNotEqual(direct, expanded)
        np.testing.assert_allclose(expanded, direct, rtol=1e-4)
        self.assertRaises(ConfigurationError, kernels.EvalPolicy, equal_power_tol=1.0)

    def test_negative_p(self):
        # Convergent as long as p + a > 0.
        p, a, b, s = -0.5, 2.0, 0.5, 0.1
        np.testing.assert_allclose(kernels.shifted_e1_transform(0.0, p, a, b, s), laplace_by_quadrature(p, a, b, s), rtol=1e-9)

    def test_exponential_factor(self):
        p, a, b, s = 1.0, 2.0, 0.5, 0.0
        np.testing.assert_allclose(
            kernels.shifted_e1_transform(3.0, p, a, b, s), math.exp(3.0) * kernels.laplace_shifted_e1(p, a, b, s), rtol=1e-13
        )

    def test_laplace_domain(self):
        self.assertRaises(DomainError, kernels.laplace_shifted_e1, 0.0, 1.0, 1.0, 0.0)
        self.assertRaises(DomainError, kernels.laplace_shifted_e1, 1.0, 0.0, 1.0, 0.0)
        self.assertRaises(DomainError, kernels.laplace_shifted_e1, 1.0, 1.0, 1.0, -1.0)
        self.assertRaises(DomainError, kernels.shifted_e1_transform, 0.0, -3.0, 2.0, 1.0, 0.0)


if __name__ == "__main__":
    unittest.main()
