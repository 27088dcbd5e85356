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

import logging
import math
from dataclasses import dataclass

import numpy as np

from fracdyn.frac_utils import DomainError, FracOrder, SampledFunction
from fracdyn.specialfn import POLE_TOL, gamma, gamma_ratio, rgamma

__author__ = "fracdyn developers"

logger = logging.getLogger("frac.operators")

INTEGRAL_RULES = ("left", "right", "trapezoid")


@dataclass(frozen=True)
class Monomial:
    """coefficient * t**exponent"""
    coefficient: float
    exponent: float

    @property
    def is_zero(self):
        return self.coefficient == 0

    def __call__(self, t):
        if self.is_zero:
            return np.zeros_like(np.asarray(t, dtype=float))
        return self.coefficient * np.asarray(t, dtype=float) ** self.exponent


class KernelWeights:
    """
    Integrals of the kernel K_alpha(t) = t^(alpha-1)/Gamma(alpha) over the grid cells:
        w[n][k] = tau^alpha ((n-k)^alpha - (n-1-k)^alpha) / Gamma(alpha+1),  0 <= k < n
    The table is Toeplitz, only the lag values are stored and rows are served as views.
    hat_row(n) gives the product trapezoid weights of a piecewise linear interpolant over nodes 0..n
    """

    def __init__(self, alpha, grid):
        self.alpha = FracOrder(alpha).check(0.0)
        self.grid = grid
        self._powers = np.arange(grid.n_steps + 1, dtype=float) ** self.alpha
        self.scale = grid.tau ** self.alpha / gamma(self.alpha + 1)
        self._lag = self.scale * np.diff(self._powers)
        self._lag.flags.writeable = False
        self._hat = None

    @property
    def is_local(self):
        """alpha=1: every weight is tau and the history collapses to the previous step"""
        return self.alpha == 1

    @property
    def lags(self):
        """lags[m] = w[n][n-1-m]"""
        return self._lag

    def row(self, n):
        """w[n][0..n-1] as a read only view"""
        if not 1 <= n <= self.grid.n_steps:
            raise IndexError("row {} outside of 1..{}".format(n, self.grid.n_steps))
        return self._lag[n - 1::-1] if n > 1 else self._lag[:1]

    def __getitem__(self, n):
        return self.row(n)

    def row_sum(self, n):
        return math.fsum(self.row(n))

    def hat_row(self, n):
        """Weights of f(t_0..t_n) in the integral over [0, t_n] of K_alpha(t_n - s) times the linear interpolant"""
        if not 1 <= n <= self.grid.n_steps:
            raise IndexError("row {} outside of 1..{}".format(n, self.grid.n_steps))
        if self._hat is None:
            higher = np.arange(self.grid.n_steps + 1, dtype=float) ** (self.alpha + 1)
            self._hat = (higher, np.diff(higher, 2), self.grid.tau ** self.alpha / gamma(self.alpha + 2))
        higher, second, scale = self._hat
        row = np.empty(n + 1)
        row[0] = higher[n - 1] - (n - 1 - self.alpha) * self._powers[n]
        if n >= 2:
            row[1:n] = second[n - 2::-1]
        row[n] = 1.0
        return scale * row


def frac_integral_monomial(alpha, m):
    """
    I_alpha of a monomial: c t^b -> c Gamma(b+1)/Gamma(alpha+b+1) t^(b+alpha). alpha=0 is the identity
    """
    alpha = FracOrder(alpha)
    if m.exponent <= -1:
        raise DomainError("I_alpha of t^{} is not defined, exponent must be > -1".format(m.exponent))
    if m.is_zero:
        return Monomial(0.0, m.exponent + alpha)
    return Monomial(m.coefficient * gamma_ratio(m.exponent + 1, m.exponent + alpha + 1), m.exponent + alpha)


def rl_derivative_monomial(alpha, m):
    """Riemann-Liouville derivative of a monomial. Zero when the 1/Gamma factor hits a pole"""
    alpha = FracOrder(alpha)
    if m.exponent <= -1:
        raise DomainError("dRL of t^{} is not defined, exponent must be > -1".format(m.exponent))
    ratio = 0.0 if m.is_zero else gamma_ratio(m.exponent + 1, m.exponent - alpha + 1)
    return Monomial(m.coefficient * ratio, m.exponent - alpha)


def caputo_derivative_monomial(alpha, m):
    """
    Caputo derivative of a monomial. Integer exponents below ceil(alpha) are annihilated, constants included
    """
    alpha = FracOrder(alpha)
    order = math.ceil(alpha)
    if m.exponent < 0:
        raise DomainError("dC of t^{} is not defined, exponent must be >= 0".format(m.exponent))
    integer_exponent = m.exponent == int(m.exponent)
    if integer_exponent and m.exponent < order:
        return Monomial(0.0, m.exponent - alpha)
    if not integer_exponent and m.exponent < order - 1:
        raise DomainError("dC of order {} of t^{} is not defined".format(float(alpha), m.exponent))
    return rl_derivative_monomial(alpha, m)


def _check_rule(rule):
    if rule not in INTEGRAL_RULES:
        raise DomainError("unknown quadrature rule '{}', use one of {}".format(rule, ", ".join(INTEGRAL_RULES)))


def _toeplitz_apply(lags, values):
    """out[n] = sum_{k<n} lags[n-1-k] values[k] for n = 1..len(lags), column by column"""
    n_steps = len(lags)
    if values.ndim == 1:
        return np.convolve(values[:n_steps], lags)[:n_steps]
    return np.stack([np.convolve(values[:n_steps, c], lags)[:n_steps] for c in range(values.shape[1])], axis=1)


def frac_integral_num(f, alpha, rule="left", weights=None):
    """
    (I_alpha f)(t_n) by product quadrature with exact kernel integrals.
    :param f: SampledFunction
    :param alpha: order > 0
    :param rule: 'left' piecewise constant with the cell left value (exact on constants),
        'right' piecewise constant with the cell right value (usable when f(0) is a singular sentinel),
        'trapezoid' piecewise linear interpolant
    :param weights: KernelWeights of (alpha, f.grid) to reuse
    :return: SampledFunction, node 0 is 0
    """
    alpha = FracOrder(alpha).check(0.0)
    _check_rule(rule)
    if f.singular_origin and rule != "right":
        raise DomainError("f(0) is a singular sentinel; only the 'right' rule can integrate it")
    weights = weights or KernelWeights(alpha, f.grid)
    values = f.values
    out = np.zeros(values.shape)
    if rule == "left":
        out[1:] = _toeplitz_apply(weights.lags, values)
    elif rule == "right":
        out[1:] = _toeplitz_apply(weights.lags, values[1:])
    else:
        for n in range(1, f.grid.n_steps + 1):
            out[n] = weights.hat_row(n) @ values[:n + 1]
    return SampledFunction(f.grid, out)


def _check_unit_order(alpha):
    return FracOrder(alpha).check(0.0, 1.0, high_open=True)


def caputo_derivative_num(f, alpha):
    """
    L1 scheme: (dC f)(t_n) = sum_m (f_m - f_{m-1})/tau * integral over cell m of K_{1-alpha}(t_n - s).
    Node 0 is a nan sentinel
    """
    alpha = _check_unit_order(alpha)
    if f.singular_origin:
        raise DomainError("Caputo derivative needs a finite f(0)")
    increments = np.diff(f.values, axis=0) / f.grid.tau
    weights = KernelWeights(1 - alpha, f.grid)
    out = np.empty(f.values.shape)
    out[0] = np.nan
    out[1:] = _toeplitz_apply(weights.lags, increments)
    return SampledFunction(f.grid, out, singular_origin=True)


def rl_derivative_num(f, alpha):
    """Caputo estimate plus the f(0) t^-alpha / Gamma(1-alpha) correction. Node 0 is a nan sentinel"""
    alpha = _check_unit_order(alpha)
    caputo = caputo_derivative_num(f, alpha)
    nodes = f.grid.nodes[1:]
    correction = nodes ** (-alpha) * rgamma(1 - alpha, POLE_TOL)
    if f.values.ndim == 2:
        correction = correction[:, None] * f.values[0]
    else:
        correction = correction * f.values[0]
    out = caputo.values.copy()
    out[1:] += correction
    return SampledFunction(f.grid, out, singular_origin=True)


def gl_weights(alpha, count):
    """(-1)^k binomial(alpha, k) for k = 0..count by g_k = g_{k-1} (k-1-alpha)/k"""
    k = np.arange(1, count + 1, dtype=float)
    return np.concatenate(([1.0], np.cumprod((k - 1 - alpha) / k)))


def _evaluate(f, points):
    try:
        values = np.asarray(f(points), dtype=float)
        if values.shape == points.shape:
            return values
    except Exception:
        pass
    return np.array([f(x) for x in points], dtype=float)


def gl_derivative(f, t, alpha, j):
    """
    Grunwald-Letnikov derivative h^-alpha sum_{k=0..j} g_k f(t - k h), h = t/j
    :param f: callable real -> real, vectorized or not
    :param t: evaluation time > 0
    :param alpha: order > 0
    :param j: number of steps >= 1
    :return: float
    """
    alpha = FracOrder(alpha).check(0.0)
    if not t > 0:
        raise DomainError("Grunwald-Letnikov derivative needs t > 0, got {}".format(t))
    if int(j) != j or j < 1:
        raise DomainError("Grunwald-Letnikov derivative needs j >= 1, got {}".format(j))
    j = int(j)
    h = t / j
    points = np.maximum(t - h * np.arange(j + 1, dtype=float), 0.0)
    points[-1] = 0.0
    return math.fsum(gl_weights(alpha, j) * _evaluate(f, points)) / h ** alpha


def gl_derivative_num(f, alpha):
    """Grunwald-Letnikov derivative of sampled data with h = tau, tau^-alpha sum_k g_k f_{n-k}. Node 0 is a sentinel"""
    alpha = FracOrder(alpha).check(0.0, 1.0)
    if f.singular_origin:
        raise DomainError("Grunwald-Letnikov derivative needs a finite f(0)")
    g = gl_weights(alpha, f.grid.n_steps)
    values = f.values
    if values.ndim == 1:
        out = np.convolve(g, values)[:f.grid.node_count]
    else:
        out = np.stack([np.convolve(g, values[:, c])[:f.grid.node_count] for c in range(values.shape[1])], axis=1)
    out = out / f.grid.tau ** alpha
    out[0] = np.nan
    return SampledFunction(f.grid, out, singular_origin=True)
