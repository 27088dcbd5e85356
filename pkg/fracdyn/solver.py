# -*- coding: utf-8 -*-

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

"""
Time stepping for fractional initial value problems written in integral form
    Caputo: u(t) = u(0) + I_alpha[f(., u)](t)
    RL:     v(t) = K_alpha(t) v0 + I_alpha[f(., v)](t)
All methods keep the whole history, a step costs O(n) and a solve O(N^2).
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from fracdyn.frac_utils import (DomainError, FracOrder, ModelRestriction, NonlinearSolveFailure, RhsEvaluationError,
                                SolutionPath, SolverOverflow)
from fracdyn.linode import CAPUTO, RIEMANN_LIOUVILLE, check_kind
from fracdyn.operators import KernelWeights
from fracdyn.specialfn import rgamma

__author__ = "fracdyn developers"

logger = logging.getLogger("frac.solver")

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
CORRECTOR_ITERATIONS = 1
OVERFLOW_THRESHOLD = 1e150
METHODS = ("explicit", "implicit", "adams")


@dataclass
class FracIVP:
    """
    kind: 'caputo' or 'rl'; rhs(t, u) with u a vector of dimension d returns a vector of dimension d.
    datum is u(0) for Caputo, I_{1-alpha}v(0+) for RL. horizon, when given, must be the grid end
    """
    kind: str
    alpha: float
    rhs: Callable
    datum: np.ndarray
    horizon: Optional[float] = None

    def __post_init__(self):
        self.kind = check_kind(self.kind)
        high_open = self.kind == RIEMANN_LIOUVILLE
        self.alpha = FracOrder(self.alpha)
        if self.kind == RIEMANN_LIOUVILLE and self.alpha == 1:
            high_open = False
        self.alpha.check(0.0, 1.0, high_open=high_open)
        self.datum = np.atleast_1d(np.asarray(self.datum, dtype=float))
        if self.datum.ndim != 1 or not np.all(np.isfinite(self.datum)):
            raise DomainError("initial datum must be a finite vector")
        if not callable(self.rhs):
            raise DomainError("rhs must be callable as rhs(t, u)")

    @property
    def dimension(self):
        return len(self.datum)


def kernel_weights(alpha, grid):
    """Kernel weights table of order alpha over grid, shared by every method"""
    return KernelWeights(alpha, grid)


class _Stepper:
    """Evaluation of the rhs with error wrapping plus the bookkeeping shared by the methods"""

    def __init__(self, ivp, grid, method, overflow_threshold):
        if ivp.horizon is not None and abs(ivp.horizon - grid.t_end) > 1e-9 * max(ivp.horizon, grid.tau):
            raise DomainError("problem horizon {} does not match the grid end {}".format(ivp.horizon, grid.t_end))
        self.ivp = ivp
        self.grid = grid
        self.nodes = grid.nodes
        self.method = method
        self.overflow_threshold = overflow_threshold
        self.weights = kernel_weights(ivp.alpha, grid)
        d = ivp.dimension
        self.states = np.empty((grid.node_count, d))
        self.rhs_values = np.full((grid.node_count, d), np.nan)
        logger.debug("{} solve kind={} alpha={} tau={} steps={} d={}".format(
            method, ivp.kind, float(ivp.alpha), grid.tau, grid.n_steps, d))

    def rhs(self, n, u, t=None):
        t = self.nodes[n] if t is None else t
        try:
            value = np.asarray(self.ivp.rhs(t, u), dtype=float).reshape(-1)
        except Exception as e:
            raise RhsEvaluationError("rhs failed at step {} t={}: {}".format(n, t, e), step=n)
        if value.shape != (self.ivp.dimension,):
            raise RhsEvaluationError("rhs returned {} values at step {}, expected {}".format(
                value.size, n, self.ivp.dimension), step=n)
        return value

    def accept(self, n, value):
        if not np.all(np.abs(value) <= self.overflow_threshold):
            raise SolverOverflow("solution exceeds {:g} at step {} t={}".format(
                self.overflow_threshold, n, self.nodes[n]), step=n)
        self.states[n] = value

    def path(self, flags=()):
        meta = {"method": self.method, "alpha": float(self.ivp.alpha), "kind": self.ivp.kind, "flags": list(flags)}
        return SolutionPath(self.grid, self.states, meta)


def history_sum(weights, values, n):
    """sum_{k<n} w[n][k] values[k] for vector states"""
    return weights.row(n) @ values[:n]


def solve_explicit_euler(ivp, grid, overflow_threshold=OVERFLOW_THRESHOLD):
    """U_{n+1} = U_0 + sum_{k<=n} f(t_k, U_k) w[n+1][k]. Caputo only"""
    if ivp.kind != CAPUTO:
        raise ModelRestriction("explicit Euler is not available for Riemann-Liouville problems: the solution is "
                               "singular at t=0, so at the first time step only the implicit interpolant can be used")
    st = _Stepper(ivp, grid, "explicit", overflow_threshold)
    st.accept(0, ivp.datum)
    for n in range(grid.n_steps):
        st.rhs_values[n] = st.rhs(n, st.states[n])
        if st.weights.is_local:
            value = st.states[n] + grid.tau * st.rhs_values[n]
        else:
            value = ivp.datum + history_sum(st.weights, st.rhs_values, n + 1)
        st.accept(n + 1, value)
    return st.path()


def _residual_norm(residual, x):
    return np.max(np.abs(residual)) / max(1.0, np.max(np.abs(x)))


def solve_step(func, weight, known, guess, step, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER):
    """
    Solves x - weight*func(x) = known. Newton with a finite difference jacobian, then a Broyden fallback
    :param func: x -> f(t_{n+1}, x)
    :param step: step index, for error reports
    :return: x as ndarray
    """
    def residual(x):
        return x - weight * func(x) - known

    x = np.array(guess, dtype=float)
    d = len(x)
    for _ in range(max_iter):
        g = residual(x)
        if _residual_norm(g, x) <= tol:
            return x
        fx = func(x)
        jacobian = np.eye(d)
        for i in range(d):
            h = 1e-7 * max(1.0, abs(x[i]))
            shifted = x.copy()
            shifted[i] += h
            jacobian[:, i] -= weight * (func(shifted) - fx) / h
        try:
            x = x + np.linalg.solve(jacobian, -g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(x)):
            break
    logger.debug("newton stalled at step {}, trying broyden".format(step))
    try:
        sol = optimize.root(residual, np.asarray(guess, dtype=float), method="broyden1",
                            options={"maxiter": max_iter, "fatol": tol})
        if np.all(np.isfinite(sol.x)) and _residual_norm(residual(sol.x), sol.x) <= tol:
            return sol.x
    except (ArithmeticError, ValueError, np.linalg.LinAlgError):
        pass
    raise NonlinearSolveFailure("implicit step {} did not reach residual {:g} in {} iterations".format(
        step, tol, max_iter), step=step)


def solve_implicit_euler(ivp, grid, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER,
                         overflow_threshold=OVERFLOW_THRESHOLD):
    """
    U_{n+1} = U_0 + sum_{k<=n} f(t_{k+1}, U_{k+1}) w[n+1][k] for Caputo;
    V_{n+1} = K_alpha(t_{n+1}) v0 + same sum for RL, with a nan sentinel at node 0 when alpha < 1
    """
    st = _Stepper(ivp, grid, "implicit", overflow_threshold)
    rl = ivp.kind == RIEMANN_LIOUVILLE and not st.weights.is_local
    flags = ()
    if rl:
        st.states[0] = np.nan
        flags = ("singular_origin",)
        kernel_at = rgamma(ivp.alpha) * st.nodes[1:] ** (ivp.alpha - 1)
    else:
        st.accept(0, ivp.datum)
    # lagged[k] = f(t_{k+1}, U_{k+1})
    lagged = np.empty((grid.n_steps, ivp.dimension))
    for n in range(grid.n_steps):
        t_next = st.nodes[n + 1]
        if st.weights.is_local:
            weight = grid.tau
            known = st.states[n]
        else:
            weight = st.weights.lags[0]
            known = kernel_at[n] * ivp.datum if rl else ivp.datum.copy()
            if n > 0:
                known = known + st.weights.row(n + 1)[:n] @ lagged[:n]
        if rl and n == 0:
            guess = known
        else:
            guess = known + weight * st.rhs(n, st.states[n])

        def func(x, n=n, t=t_next):
            return st.rhs(n + 1, x, t)

        value = solve_step(func, weight, known, guess, n + 1, tol, max_iter)
        st.accept(n + 1, value)
        lagged[n] = st.rhs(n + 1, value)
    return st.path(flags)


def solve_adams_pc(ivp, grid, corrector_iterations=CORRECTOR_ITERATIONS, overflow_threshold=OVERFLOW_THRESHOLD):
    """
    Fractional Adams predictor corrector. Predictor is the explicit Euler step, the corrector integrates the
    piecewise linear interpolant of f exactly against the kernel. Caputo only
    """
    if ivp.kind != CAPUTO:
        raise ModelRestriction("the Adams predictor corrector needs f(t_0, u_0) and is only available for Caputo "
                               "problems; use the implicit method for Riemann-Liouville problems")
    if int(corrector_iterations) != corrector_iterations or corrector_iterations < 1:
        raise DomainError("corrector iterations must be a positive integer, got {}".format(corrector_iterations))
    st = _Stepper(ivp, grid, "adams", overflow_threshold)
    st.accept(0, ivp.datum)
    for n in range(grid.n_steps):
        st.rhs_values[n] = st.rhs(n, st.states[n])
        if st.weights.is_local:
            predicted = st.states[n] + grid.tau * st.rhs_values[n]
            for _ in range(corrector_iterations):
                predicted = st.states[n] + 0.5 * grid.tau * (st.rhs_values[n] + st.rhs(n + 1, predicted))
            st.accept(n + 1, predicted)
            continue
        predicted = ivp.datum + history_sum(st.weights, st.rhs_values, n + 1)
        hat = st.weights.hat_row(n + 1)
        known = ivp.datum + hat[:n + 1] @ st.rhs_values[:n + 1]
        for _ in range(corrector_iterations):
            predicted = known + hat[n + 1] * st.rhs(n + 1, predicted)
        st.accept(n + 1, predicted)
    return st.path()


def solve(ivp, grid, method, **kwargs):
    """Dispatches to the solve_<method> functions"""
    if method == "explicit":
        return solve_explicit_euler(ivp, grid, **kwargs)
    if method == "implicit":
        return solve_implicit_euler(ivp, grid, **kwargs)
    if method == "adams":
        return solve_adams_pc(ivp, grid, **kwargs)
    raise DomainError("unknown method '{}', use one of {}".format(method, ", ".join(METHODS)))
