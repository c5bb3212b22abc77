"""
Tests the quadrature oracle against the registered closed forms.
"""
import unittest
from unittest import mock

import numpy as np

from nomaa.analysis import Scenario, full_csit, supported
from nomaa.analysis.exceptions import ConfigurationError, MissingFormula
from nomaa.analysis.oracle import formulas, quad_verify, register_formula
from nomaa.analysis.oracle import quadrature

CONFIG = {supported.QUAD_EPSREL: 1e-9}


class TestQuadrature(unittest.TestCase):
    def test_registered_formulas(self):
        registered = formulas()
        self.assertEqual(len(registered), 15)
        self.assertEqual(registered, sorted(registered))
        for formula_id in ("phi_noma_weak", "j_b_active", "jhat_b_active", "activity_noma_a"):
            self.assertIn(formula_id, registered)

    def test_reference_point(self):
        s = Scenario.from_db(0.1, 0.9, 10.0, 10.0)
        for formula_id in formulas():
            closed, integral, rel_err = quad_verify(s, formula_id, CONFIG)
            self.assertLessEqual(rel_err, 1e-6, (formula_id, closed, integral))

    def test_other_points(self):
        for s in (Scenario.from_db(0.3, 0.7, 5.0, 0.0), Scenario.from_db(0.1, 0.9, 10.0, 30.0)):
            for formula_id in ("phi_noma_weak", "rate_noma_strong", "rate_noma_a_weak", "rate_noma_a_strong"):
                rel_err = quad_verify(s, formula_id, CONFIG)[2]
                self.assertLessEqual(rel_err, 1e-6, (s, formula_id))

    # Powers need not sum to one.
    def test_unnormalized_powers_at_high_snr(self):
        s = Scenario(2.0, 5.0, 3.0, 1e6)
        for formula_id in ("rate_noma_weak", "rate_noma_strong", "rate_noma_a_weak", "rate_noma_a_strong", "jhat_b_active"):
            closed, integral, rel_err = quad_verify(s, formula_id, CONFIG)
            self.assertLessEqual(rel_err, 1e-6, (formula_id, closed, integral))

    def test_breakpoints(self):
        self.assertEqual(quadrature._breakpoints(1.0, 2.0, 5.0), [])
        np.testing.assert_allclose(quadrature._breakpoints(1.0, 200.0, 0.01), [1.01, 2.0, 101.0])

    def test_closed_form_receives_extra_config(self):
        s = Scenario(0.45, 0.55, 10.0, 10.0)
        default = quad_verify(s, "j_b_active", CONFIG)
        expanded = quad_verify(s, "j_b_active", dict(CONFIG, **{supported.EQUAL_POWER_TOL: 0.5}))
        self.assertEqual(default[1], expanded[1])
        self.assertNotEqual(default[0], expanded[0])
        self.assertRaises(ConfigurationError, quad_verify, s, "j_b_active", {supported.REL_TOL: 0.5})

    def test_missing_formula(self):
        s = Scenario.from_db(0.1, 0.9, 10.0, 10.0)
        self.assertRaises(MissingFormula, quad_verify, s, "rate_cdma")
        self.assertRaises(ConfigurationError, quad_verify, s, "phi_oma_weak", {"epsrel": 1e-3})

    def test_detects_a_sign_error(self):
        s = Scenario.from_db(0.1, 0.9, 10.0, 10.0)
        original = full_csit._beta
        with mock.patch("nomaa.analysis.full_csit._beta", side_effect=lambda s, li, lj, policy: -original(s, li, lj, policy)):
            closed, integral, rel_err = quad_verify(s, "j_b_active", CONFIG)
        self.assertLess(closed, 0.0)
        self.assertGreater(integral, 0.0)
        self.assertGreater(rel_err, 1.0)
        self.assertLessEqual(quad_verify(s, "j_b_active", CONFIG)[2], 1e-6)

    def test_register_formula(self):
        s = Scenario.from_db(0.1, 0.9, 10.0, 10.0)
        register_formula("weak_mean", lambda s, extra_config: 1.0 / s.lambda_sum, lambda s, options: _weak_mean(s, options))
        try:
            self.assertIn("weak_mean", formulas())
            closed, integral, rel_err = quad_verify(s, "weak_mean", CONFIG)
            self.assertAlmostEqual(closed, 1.0 / s.lambda_sum)
            self.assertLessEqual(rel_err, 1e-8)
        finally:
            del quadrature._formula_pool["weak_mean"]
        self.assertNotIn("weak_mean", formulas())


def _weak_mean(s, options):
    return quadrature._weak_marginal(s, lambda a: a, 0.0, options)


if __name__ == "__main__":
    unittest.main()
