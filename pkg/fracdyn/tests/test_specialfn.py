##
# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.
##

import math
import unittest

import numpy as np

from fracdyn import specialfn
from fracdyn.frac_utils import DomainError, EvaluationRegionExceeded, NonConvergence, NonPositiveIntegerPole
from fracdyn.specialfn import MLParams, beta, gamma, gamma_ratio, mittag_leffler, mittag_leffler_values, p_alpha, \
    rgamma
from fracdyn.tests.oracles import ml_half, ml_half_complex, ml_half_half, ml_series_oracle, p_half

__author__ = "fracdyn developers"


class TestGamma(unittest.TestCase):

    def test_values(self):
        self.assertEqual(gamma(5), 24.0)
        self.assertEqual(gamma(1), 1.0)
        self.assertAlmostEqual(gamma(0.5), math.sqrt(math.pi), places=14)
        self.assertAlmostEqual(gamma(-0.5), -2 * math.sqrt(math.pi), places=13)

    def test_factorials(self):
        for n in range(1, 21):
            self.assertEqual(gamma(n), float(math.factorial(n - 1)), "Gamma({}) is not ({}-1)!".format(n, n))

    def test_poles(self):
        for z in (0, -1, -3, -50.0):
            with self.assertRaises(NonPositiveIntegerPole, msg="no pole reported at {}".format(z)):
                gamma(z)
        with self.assertRaises(DomainError):
            gamma(float("nan"))

    def test_recursion(self):
        rng = np.random.default_rng(20)
        checked = 0
        for z in rng.uniform(-10, 10, 1000):
            if abs(z - round(z)) < 1e-3 and round(z) <= 0:
                continue
            if abs(z + 1 - round(z + 1)) < 1e-3 and round(z + 1) <= 0:
                continue
            self.assertTrue(math.isclose(gamma(z + 1), z * gamma(z), rel_tol=1e-12),
                            "Gamma(z+1) != z Gamma(z) at z={}".format(z))
            checked += 1
        self.assertGreater(checked, 950)

    def test_recursion_positive_axis(self):
        for z in np.random.default_rng(21).uniform(0.1, 30, 1000):
            self.assertTrue(math.isclose(gamma(z + 1), z * gamma(z), rel_tol=1e-12),
                            "Gamma(z+1) != z Gamma(z) at z={}".format(z))

    def test_lower_bound_near_zero(self):
        for z in np.random.default_rng(22).uniform(0.0, 1.0, 1000):
            if z == 0.0:
                continue
            self.assertGreaterEqual(gamma(z), math.exp(-1) / z, "Gamma({}) below exp(-1)/z".format(z))

    def test_rgamma(self):
        self.assertEqual(rgamma(0.0), 0.0)
        self.assertEqual(rgamma(-2 + 1e-12), 0.0)
        self.assertAlmostEqual(rgamma(0.5), 1 / math.sqrt(math.pi), places=15)

    def test_gamma_ratio(self):
        self.assertEqual(gamma_ratio(2, 0), 0.0)
        self.assertAlmostEqual(gamma_ratio(3, 2.5), 2 / gamma(2.5), places=14)
        self.assertTrue(math.isclose(gamma_ratio(200.5, 200), math.exp(math.lgamma(200.5) - math.lgamma(200)),
                                     rel_tol=1e-10))
        with self.assertRaises(DomainError):
            gamma_ratio(-1, 2)


class TestBeta(unittest.TestCase):

    def test_values(self):
        self.assertAlmostEqual(beta(1, 1), 1.0, places=15)
        self.assertAlmostEqual(beta(2, 3), 1 / 12, places=15)
        self.assertAlmostEqual(beta(0.5, 0.5), math.pi, places=14)

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        for a, b in rng.uniform(0.05, 20, (100, 2)):
            self.assertEqual(beta(a, b), beta(b, a))

    def test_domain(self):
        for args in ((0, 1), (-0.5, 2), (1, -1)):
            with self.assertRaises(DomainError):
                beta(*args)


class TestMittagLeffler(unittest.TestCase):

    def test_examples(self):
        self.assertAlmostEqual(mittag_leffler((1, 1), 1).real, math.e, places=13)
        self.assertEqual(mittag_leffler((0.7, 1), 0), 1.0)
        self.assertAlmostEqual(mittag_leffler((2, 1), 1).real, math.cosh(1), places=13)
        expected = ml_series_oracle(0.5, 0.5, -1)
        value = mittag_leffler(MLParams(0.5, 0.5), -1)
        self.assertAlmostEqual(value.real, expected.real, places=13)
        self.assertAlmostEqual(value.real, ml_half_half(1.0), places=12)

    def test_real_arguments_give_real_values(self):
        for z in (-30.0, -1.0, 0.0, 2.5):
            self.assertEqual(mittag_leffler((0.6, 1.2), z).imag, 0.0)

    def test_exponential(self):
        for z in np.linspace(-30, 30, 61):
            value = mittag_leffler((1, 1), z).real
            self.assertTrue(math.isclose(value, math.exp(z), rel_tol=1e-10), "E_1({}) = {}".format(z, value))

    def test_origin(self):
        for a, b in ((0.3, 2.5), (1.5, 0.4), (1, 1)):
            self.assertTrue(math.isclose(mittag_leffler((a, b), 0).real, 1 / gamma(b), rel_tol=1e-14))

    def test_complete_monotonicity(self):
        xs = np.linspace(0, 20, 200)
        for alpha in (0.3, 0.5, 0.8, 1.0):
            values = mittag_leffler_values((alpha, 1), -xs).real
            self.assertTrue(np.all(np.diff(values) < 0), "E_{}(-x) is not decreasing".format(alpha))
            self.assertTrue(np.all(values > 0), "E_{}(-x) is not positive".format(alpha))

    def test_half_order(self):
        for x in np.linspace(0, 39, 157):
            value = mittag_leffler((0.5, 1), -x).real
            self.assertTrue(math.isclose(value, ml_half(x), rel_tol=1e-12), "E_1/2(-{}) = {}".format(x, value))

    def test_half_half_order(self):
        for x in np.linspace(0, 20, 81):
            value = mittag_leffler((0.5, 0.5), -x).real
            self.assertTrue(math.isclose(value, ml_half_half(x), rel_tol=1e-9, abs_tol=1e-15),
                            "E_1/2,1/2(-{}) = {}".format(x, value))

    def test_tail_matches_series(self):
        # both sides of the switch to the tail expansion
        for alpha in (0.3, 0.6, 0.9):
            switch = specialfn.TAIL_SWITCH ** alpha
            for x in (switch * (1 - 1e-9), switch * 1.01):
                value = mittag_leffler((alpha, 1), -x).real
                expected = ml_series_oracle(alpha, 1.0, -x, terms=3000, dps=80).real
                self.assertTrue(math.isclose(value, expected, rel_tol=1e-10),
                                "E_{}(-{}) = {}, expected {}".format(alpha, x, value, expected))

    def test_deep_negative_axis(self):
        self.assertTrue(math.isclose(mittag_leffler((1, 1), -50).real, math.exp(-50), rel_tol=1e-12))
        self.assertTrue(math.isclose(mittag_leffler((1, 2), -50).real, (math.exp(-50) - 1) / -50, rel_tol=1e-12))
        self.assertTrue(math.isclose(mittag_leffler((0.5, 1), -1000).real, ml_half(1000), rel_tol=1e-12))

    def test_complex(self):
        for z in (0.5 + 1j, -2 + 3j, 4j):
            value = mittag_leffler((0.5, 1), z)
            expected = ml_half_complex(z)
            self.assertTrue(abs(value - expected) <= 1e-12 * abs(expected), "E_1/2({}) = {}".format(z, value))

    def test_region(self):
        with self.assertRaises(EvaluationRegionExceeded):
            mittag_leffler((0.5, 1), 50)
        with self.assertRaises(EvaluationRegionExceeded):
            mittag_leffler((0.5, 1), 30 + 30j)
        with self.assertRaises(EvaluationRegionExceeded):
            mittag_leffler((1.5, 1), -50)
        with self.assertRaises(NonConvergence):
            mittag_leffler((1, 1), 1, max_terms=5)
        with self.assertRaises(DomainError):
            mittag_leffler((0, 1), 1)
        with self.assertRaises(DomainError):
            mittag_leffler((1, 1), complex("nan"))

    def test_values_shape(self):
        values = mittag_leffler_values((1, 1), np.zeros((2, 3)))
        self.assertEqual(values.shape, (2, 3))
        np.testing.assert_array_equal(values, np.ones((2, 3)))


class TestPAlpha(unittest.TestCase):

    def test_examples(self):
        self.assertEqual(p_alpha(1, 1, 0), 1.0)
        self.assertAlmostEqual(p_alpha(1, 1, -2).real, math.exp(-2), places=14)
        self.assertAlmostEqual(p_alpha(4, 0.5, 0).real, 1 / (2 * math.sqrt(math.pi)), places=14)
        self.assertEqual(p_alpha(0, 1, -2), 1.0)

    def test_half_order(self):
        for t in (0.01, 0.5, 1.0, 7.0):
            self.assertTrue(math.isclose(p_alpha(t, 0.5, -1).real, p_half(t), rel_tol=1e-10))

    def test_domain(self):
        with self.assertRaises(DomainError):
            p_alpha(0, 0.5, -1)
        with self.assertRaises(DomainError):
            p_alpha(1, 1.5, -1)


if __name__ == '__main__':
    unittest.main()
