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
Closed form solutions of the linear problems
    dC u = lam u + f,  u(0) = u0
    dRL v = lam v + f, I_{1-alpha} v(0+) = v0
through Mittag-Leffler functions and the variation of constants formula with kernel P_alpha
"""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from fracdyn.frac_utils import DomainError, FracOrder, SampledFunction, SolutionPath
from fracdyn.specialfn import MLParams, mittag_leffler_values

__author__ = "fracdyn developers"

logger = logging.getLogger("frac.linode")

CAPUTO = "caputo"
RIEMANN_LIOUVILLE = "rl"
KINDS = (CAPUTO, RIEMANN_LIOUVILLE)


def check_kind(kind):
    kind = str(kind).lower()
    if kind not in KINDS:
        raise DomainError("unknown derivative kind '{}', use one of {}".format(kind, ", ".join(KINDS)))
    return kind


@dataclass(frozen=True)
class LinearProblem:
    """
    kind: 'caputo' or 'rl'. datum is u(0) for Caputo and I_{1-alpha}v(0+) for RL, that is v(0) when alpha=1.
    forcing: None, a callable of t or a SampledFunction on the solve grid
    """
    kind: str
    alpha: float
    lam: float
    datum: float
    forcing: Any = None

    def __post_init__(self):
        object.__setattr__(self, "kind", check_kind(self.kind))
        object.__setattr__(self, "alpha", FracOrder(self.alpha).check(0.0, 1.0))
        for name in ("lam", "datum"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise DomainError("linear problem {} must be a finite real, got {}".format(name, value))
            object.__setattr__(self, name, float(value))


def _path(p, grid, values, method, singular=False):
    meta = {"method": method, "alpha": float(p.alpha), "kind": p.kind, "flags": []}
    if singular:
        meta["flags"].append("singular_origin")
    return SolutionPath(grid, np.asarray(values, dtype=float).reshape(-1, 1), meta)


def _homogeneous_caputo_values(p, grid, **ml_kwargs):
    ml = mittag_leffler_values(MLParams(p.alpha, 1.0), p.lam * grid.nodes ** p.alpha, **ml_kwargs)
    return p.datum * ml.real


def _homogeneous_rl_values(p, grid, **ml_kwargs):
    if p.alpha == 1:
        return _homogeneous_caputo_values(p, grid, **ml_kwargs)
    nodes = grid.nodes[1:]
    values = np.empty(grid.node_count)
    values[0] = np.nan
    ml = mittag_leffler_values(MLParams(p.alpha, p.alpha), p.lam * nodes ** p.alpha, **ml_kwargs)
    values[1:] = p.datum * nodes ** (p.alpha - 1) * ml.real
    return values


def _forcing_samples(p, grid):
    forcing = p.forcing
    if isinstance(forcing, SampledFunction):
        if forcing.grid != grid or forcing.values.ndim != 1 or forcing.singular_origin:
            raise DomainError("sampled forcing must be a finite scalar function on the solve grid")
        return forcing.values
    if not callable(forcing):
        raise DomainError("forcing must be a callable or a SampledFunction")
    return SampledFunction.from_callable(forcing, grid).values


def convolution_term(p, grid, **ml_kwargs):
    """
    Q_n, the product integration of int_0^t_n P_alpha(t_n - s) f(s) ds: left value of f on each cell, exact
    integral of (t_n - s)^(alpha-1) and E_{alpha,alpha} taken at the cell right end distance
    """
    f = _forcing_samples(p, grid)
    lags = np.arange(grid.n_steps, dtype=float)
    ml = mittag_leffler_values(MLParams(p.alpha, p.alpha), p.lam * (lags * grid.tau) ** p.alpha,
                               **ml_kwargs).real
    cell = grid.tau ** p.alpha * (np.diff(np.arange(grid.n_steps + 1, dtype=float) ** p.alpha)) / p.alpha
    kernel = cell * ml
    q = np.zeros(grid.node_count)
    q[1:] = np.convolve(f[:grid.n_steps], kernel)[:grid.n_steps]
    return q


def solve_caputo_homogeneous(p, grid, **ml_kwargs):
    """u0 E_alpha(lam t^alpha) at every node"""
    if p.kind != CAPUTO or p.forcing is not None:
        raise DomainError("solve_caputo_homogeneous needs an unforced Caputo problem")
    return _path(p, grid, _homogeneous_caputo_values(p, grid, **ml_kwargs), "analytic")


def solve_rl_homogeneous(p, grid, **ml_kwargs):
    """v0 P_alpha(t_n; -lam) for n >= 1, node 0 singular unless alpha=1"""
    if p.kind != RIEMANN_LIOUVILLE or p.forcing is not None:
        raise DomainError("solve_rl_homogeneous needs an unforced Riemann-Liouville problem")
    return _path(p, grid, _homogeneous_rl_values(p, grid, **ml_kwargs), "analytic", singular=p.alpha != 1)


def solve_caputo_forced(p, grid, **ml_kwargs):
    if p.kind != CAPUTO or p.forcing is None:
        raise DomainError("solve_caputo_forced needs a forced Caputo problem")
    values = _homogeneous_caputo_values(p, grid, **ml_kwargs) + convolution_term(p, grid, **ml_kwargs)
    return _path(p, grid, values, "analytic")


def solve_rl_forced(p, grid, **ml_kwargs):
    if p.kind != RIEMANN_LIOUVILLE or p.forcing is None:
        raise DomainError("solve_rl_forced needs a forced Riemann-Liouville problem")
    values = _homogeneous_rl_values(p, grid, **ml_kwargs) + convolution_term(p, grid, **ml_kwargs)
    return _path(p, grid, values, "analytic", singular=p.alpha != 1)


def solve_linear(p, grid, **ml_kwargs):
    """
    Routes a linear problem to its closed form
    :param ml_kwargs: series_bound and max_terms handed to the Mittag-Leffler evaluation
    """
    logger.debug("analytic solve kind={} alpha={} lam={} forced={}".format(p.kind, float(p.alpha), p.lam,
                                                                           p.forcing is not None))
    if p.kind == CAPUTO:
        return solve_caputo_forced(p, grid, **ml_kwargs) if p.forcing is not None \
            else solve_caputo_homogeneous(p, grid, **ml_kwargs)
    return solve_rl_forced(p, grid, **ml_kwargs) if p.forcing is not None \
        else solve_rl_homogeneous(p, grid, **ml_kwargs)
