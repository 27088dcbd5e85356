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

from fracdyn.frac_utils import (DomainError, ModelRestriction, NonlinearSolveFailure, RhsEvaluationError,
                                SolverOverflow, UniformGrid)
from fracdyn.linode import CAPUTO, RIEMANN_LIOUVILLE
from fracdyn.operators import KernelWeights
from fracdyn.solver import (FracIVP, history_sum, kernel_weights, solve, solve_adams_pc, solve_explicit_euler,
                            solve_implicit_euler, solve_step)
from fracdyn.tests.oracles import ml_half, ml_half_half

__author__ = "fracdyn developers"


def decay(t, u):
    return -u


def caputo_decay(alpha, datum=1.0):
    return FracIVP(CAPUTO, alpha, decay, [datum], horizon=1.0)


class TestFracIVP(unittest.TestCase):

    def test_validation(self):
        with self.assertRaises(DomainError):
            FracIVP(CAPUTO, 1.2, decay, [1.0])
        with self.assertRaises(DomainError):
            FracIVP(CAPUTO, 0.5, "decay", [1.0])
        with self.assertRaises(DomainError):
            FracIVP(CAPUTO, 0.5, decay, [np.nan])
        with self.assertRaises(DomainError):
            FracIVP("other", 0.5, decay, [1.0])
        self.assertEqual(FracIVP(RIEMANN_LIOUVILLE, 1, decay, 2.0).dimension, 1)
        self.assertEqual(FracIVP(CAPUTO, 0.5, decay, [1.0, 2.0]).dimension, 2)

    def test_horizon_must_match_grid(self):
        with self.assertRaises(DomainError):
            solve(caputo_decay(0.5), UniformGrid(0.25, 2), "explicit")

    def test_unknown_method(self):
        with self.assertRaises(DomainError):
            solve(caputo_decay(0.5), UniformGrid(0.25, 4), "rk4")

    def test_kernel_weights(self):
        grid = UniformGrid(2 ** -5, 32)
        weights = kernel_weights(0.7, grid)
        self.assertIsInstance(weights, KernelWeights)
        np.testing.assert_array_equal(weights.lags, KernelWeights(0.7, grid).lags)


class TestZeroRhs(unittest.TestCase):

    def test_constant_paths(self):
        grid = UniformGrid(2 ** -4, 16)
        ivp = FracIVP(CAPUTO, 0.5, lambda t, u: np.zeros_like(u), [3.0, -1.0], horizon=1.0)
        for method in ("explicit", "implicit", "adams"):
            path = solve(ivp, grid, method)
            self.assertTrue(np.all(path.states == [3.0, -1.0]), "{} moved a constant path".format(method))
            self.assertEqual(path.meta["method"], method)


class TestExplicitEuler(unittest.TestCase):

    def test_exponential(self):
        path = solve_explicit_euler(caputo_decay(1), UniformGrid(2 ** -10, 1024))
        self.assertAlmostEqual(path.values[-1], math.exp(-1), delta=5e-3)

    def test_half_order(self):
        path = solve_explicit_euler(caputo_decay(0.5), UniformGrid(2 ** -10, 1024))
        self.assertAlmostEqual(path.values[-1], ml_half(1.0), delta=1e-2)

    def test_order_one_is_forward_euler(self):
        tau = 2 ** -6
        path = solve_explicit_euler(caputo_decay(1), UniformGrid(tau, 64))
        u = 1.0
        for n in range(64):
            u = u + tau * (-u)
            self.assertEqual(path.values[n + 1], u)

    def test_memory(self):
        grid = UniformGrid(2 ** -6, 64)
        path = solve_explicit_euler(caputo_decay(0.5), grid)
        weights = kernel_weights(0.5, grid)
        for n in (1, 2, 30, 64):
            expected = 1.0 + history_sum(weights, -path.states, n)
            np.testing.assert_allclose(path.states[n], expected, rtol=1e-14)

    def test_diagonal_system(self):
        grid = UniformGrid(2 ** -6, 64)
        a = np.diag([-1.0, -2.0])
        system = solve_explicit_euler(FracIVP(CAPUTO, 0.6, lambda t, u: a @ u, [1.0, 1.0], horizon=1.0), grid)
        for i, lam in enumerate((-1.0, -2.0)):
            scalar = solve_explicit_euler(FracIVP(CAPUTO, 0.6, lambda t, u, lam=lam: lam * u, [1.0]), grid)
            np.testing.assert_allclose(system.states[:, i], scalar.values, rtol=1e-13)

    def test_riemann_liouville_is_refused(self):
        ivp = FracIVP(RIEMANN_LIOUVILLE, 0.5, decay, [1.0])
        with self.assertRaises(ModelRestriction) as cm:
            solve_explicit_euler(ivp, UniformGrid(0.25, 4))
        self.assertIn("at the first time step only the implicit interpolant can be used", str(cm.exception))
        self.assertEqual(cm.exception.exit_code, 3)

    def test_rhs_failure_reports_step(self):
        def rhs(t, u):
            if t > 0.5:
                raise ValueError("boom")
            return -u

        with self.assertRaises(RhsEvaluationError) as cm:
            solve_explicit_euler(FracIVP(CAPUTO, 0.5, rhs, [1.0]), UniformGrid(0.125, 8))
        self.assertEqual(cm.exception.step, 5)

    def test_rhs_dimension_mismatch(self):
        with self.assertRaises(RhsEvaluationError):
            solve_explicit_euler(FracIVP(CAPUTO, 0.5, lambda t, u: [1.0, 2.0], [1.0]), UniformGrid(0.25, 4))

    def test_overflow(self):
        with self.assertRaises(SolverOverflow) as cm:
            solve_explicit_euler(FracIVP(CAPUTO, 1, lambda t, u: u * u, [1.0], horizon=2.0), UniformGrid(0.01, 200))
        self.assertIsNotNone(cm.exception.step)


class TestImplicitEuler(unittest.TestCase):

    def test_half_order(self):
        path = solve_implicit_euler(caputo_decay(0.5), UniformGrid(2 ** -10, 1024))
        self.assertAlmostEqual(path.values[-1], ml_half(1.0), delta=1e-2)

    def test_riemann_liouville(self):
        grid = UniformGrid(2 ** -10, 1024)
        path = solve_implicit_euler(FracIVP(RIEMANN_LIOUVILLE, 0.5, decay, [1.0], horizon=1.0), grid)
        self.assertTrue(path.singular_origin)
        self.assertTrue(np.isnan(path.values[0]))
        for t in (0.5, 1.0):
            n = int(round(t / grid.tau))
            exact = t ** -0.5 * ml_half_half(math.sqrt(t))
            self.assertAlmostEqual(path.values[n], exact, delta=5e-2, msg="RL solution at t={}".format(t))

    def test_riemann_liouville_order_one(self):
        path = solve_implicit_euler(FracIVP(RIEMANN_LIOUVILLE, 1, decay, [1.0]), UniformGrid(2 ** -10, 1024))
        self.assertFalse(path.singular_origin)
        self.assertEqual(path.values[0], 1.0)
        self.assertAlmostEqual(path.values[-1], math.exp(-1), delta=5e-3)

    def test_order_one_is_backward_euler(self):
        tau = 2 ** -5
        path = solve_implicit_euler(caputo_decay(1), UniformGrid(tau, 32))
        u = np.array([1.0])
        for n in range(32):
            u = solve_step(lambda x: -x, tau, u, u + tau * (-u), n + 1)
            self.assertEqual(path.values[n + 1], u[0])

    def test_nonlinear(self):
        # logistic growth, u' = u (1 - u) from 0.5
        grid = UniformGrid(2 ** -8, 256)
        path = solve_implicit_euler(FracIVP(CAPUTO, 1, lambda t, u: u * (1 - u), [0.5]), grid)
        exact = 1 / (1 + math.exp(-1))
        self.assertAlmostEqual(path.values[-1], exact, delta=1e-3)

    def test_solve_failure(self):
        ivp = FracIVP(CAPUTO, 1, lambda t, u: u * u + 1, [0.0])
        with self.assertRaises(NonlinearSolveFailure) as cm:
            solve_implicit_euler(ivp, UniformGrid(1.0, 1))
        self.assertEqual(cm.exception.step, 1)


class TestAdams(unittest.TestCase):

    def test_order_one_is_heun(self):
        tau = 2 ** -6
        path = solve_adams_pc(caputo_decay(1), UniformGrid(tau, 64))
        u = 1.0
        for n in range(64):
            predicted = u + tau * (-u)
            u = u + 0.5 * tau * ((-u) + (-predicted))
            self.assertEqual(path.values[n + 1], u)

    def test_order_one_is_second_order(self):
        errors = []
        for tau in (2 ** -5, 2 ** -6):
            path = solve_adams_pc(caputo_decay(1), UniformGrid.from_horizon(1.0, tau))
            errors.append(abs(path.values[-1] - math.exp(-1)))
        self.assertGreaterEqual(errors[0] / errors[1], 3.5)

    def test_better_than_explicit(self):
        grid = UniformGrid(2 ** -8, 256)
        exact = ml_half(1.0)
        adams = abs(solve_adams_pc(caputo_decay(0.5), grid).values[-1] - exact)
        explicit = abs(solve_explicit_euler(caputo_decay(0.5), grid).values[-1] - exact)
        self.assertLess(adams, explicit)

    def test_corrector_iterations(self):
        grid = UniformGrid(2 ** -6, 64)
        once = solve_adams_pc(caputo_decay(0.5), grid)
        twice = solve_adams_pc(caputo_decay(0.5), grid, corrector_iterations=2)
        self.assertAlmostEqual(once.values[-1], twice.values[-1], delta=5e-3)
        with self.assertRaises(DomainError):
            solve_adams_pc(caputo_decay(0.5), grid, corrector_iterations=0)

    def test_riemann_liouville_is_refused(self):
        with self.assertRaises(ModelRestriction):
            solve_adams_pc(FracIVP(RIEMANN_LIOUVILLE, 0.5, decay, [1.0]), UniformGrid(0.25, 4))


class TestConvergence(unittest.TestCase):

    def test_errors_shrink(self):
        taus = [2.0 ** -p for p in range(6, 11)]
        finest = UniformGrid.from_horizon(1.0, taus[-1])
        exact = ml_half(np.sqrt(finest.nodes))
        for method in ("explicit", "implicit", "adams"):
            errors = []
            for tau in taus:
                grid = UniformGrid.from_horizon(1.0, tau)
                stride = finest.n_steps // grid.n_steps
                path = solve(caputo_decay(0.5), grid, method)
                errors.append(np.max(np.abs(path.values - exact[::stride])))
            self.assertTrue(all(b < a for a, b in zip(errors, errors[1:])), "{} errors {}".format(method, errors))
            self.assertGreaterEqual(errors[0] / errors[-1], 2.5, "{} errors {}".format(method, errors))


if __name__ == '__main__':
    unittest.main()
