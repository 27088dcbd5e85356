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
Abel's mechanical problem. A bead released at height y slides to the bottom in time T(y), related to the arc length
s(y) of the curve by
    T(y) = int_0^y s'(eta) / sqrt(2 g (y - eta)) d eta,
equivalently dC^(1/2) s = T sqrt(2g/pi) with s(0) = 0, solved here by s = I_(1/2)[T sqrt(2g/pi)].
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from fracdyn.frac_utils import DomainError, InconsistentArcLength, SampledFunction, UniformGrid
from fracdyn.operators import frac_integral_num

__author__ = "fracdyn developers"

logger = logging.getLogger("frac.tautochrone")

SLOPE_TOL = 1e-6


@dataclass(frozen=True)
class AbelProblem:
    fall_time: Callable
    g: float = 9.81
    y_max: float = 1.0
    n_steps: int = 4096

    def __post_init__(self):
        if not callable(self.fall_time):
            raise DomainError("fall time must be a callable of the height")
        if not (self.g > 0 and math.isfinite(self.g)):
            raise DomainError("gravity must be positive, got {}".format(self.g))
        if not (self.y_max > 0 and math.isfinite(self.y_max)):
            raise DomainError("height range must be positive, got {}".format(self.y_max))

    @property
    def grid(self):
        return UniformGrid(self.y_max / self.n_steps, self.n_steps)


def solve_abel(p):
    """
    Arc length s over the height grid from the fall time. The half order integral uses the product trapezoid
    rule, exact for fall times linear in y
    """
    grid = p.grid
    fall = SampledFunction.from_callable(p.fall_time, grid)
    if np.any(fall.values[1:] < 0):
        raise DomainError("fall time must be non negative")
    rhs = SampledFunction(grid, fall.values * math.sqrt(2 * p.g / math.pi))
    s = frac_integral_num(rhs, 0.5, rule="trapezoid")
    drops = np.diff(s.values)
    if np.any(drops < -1e-12 * max(1.0, np.max(np.abs(s.values)))):
        raise InconsistentArcLength("arc length decreases with height; the curve would re-ascend")
    return s


def curve_from_arclength(s, slope_tol=SLOPE_TOL):
    """
    Horizontal profile psi(y) with s' = sqrt(1 + psi'^2) and psi(0) = 0. Midpoint rule on every cell with the
    centered slope: psi' dy = sqrt(ds^2 - dy^2), exact for the sqrt(y) leading term of the first cell
    """
    if s.values.ndim != 1:
        raise DomainError("arc length must be a scalar sampled function")
    dy = s.grid.tau
    ds = np.diff(s.values)
    slope = ds / dy
    worst = int(np.argmin(slope))
    if slope[worst] < 1 - slope_tol:
        raise InconsistentArcLength("arc length slope {:.6g} < 1 on cell {} (y={:.6g}); no graph curve has it".format(
            slope[worst], worst, s.grid.nodes[worst]))
    cells = np.sqrt(np.maximum(ds * ds - dy * dy, 0.0))
    psi = np.concatenate(([0.0], np.cumsum(cells)))
    return SampledFunction(s.grid, psi)


def abel_forward(s, g):
    """
    Fall time from the arc length. On each cell s is taken as a + b sqrt(eta), whose integral against
    (y - eta)^-1/2 is closed form; exact for s proportional to sqrt(y). Node 0 is a nan sentinel
    """
    if not g > 0:
        raise DomainError("gravity must be positive, got {}".format(g))
    nodes = s.grid.nodes
    roots = np.sqrt(nodes)
    slopes = np.diff(s.values) / np.diff(roots)
    fall = np.empty(s.grid.node_count)
    fall[0] = np.nan
    for n in range(1, s.grid.node_count):
        angles = np.arcsin(np.minimum(roots[:n + 1] / roots[n], 1.0))
        fall[n] = slopes[:n] @ np.diff(angles)
    fall[1:] /= math.sqrt(2 * g)
    return SampledFunction(s.grid, fall, singular_origin=True)


def cycloid_profile(k, g, y):
    """psi(y) of the tautochrone with descent time k, defined for y <= 2 g k^2 / pi^2"""
    c = 2 * g * k * k / math.pi ** 2
    y = np.asarray(y, dtype=float)
    if np.any(y > c * (1 + 1e-12)):
        raise DomainError("cycloid with descent time {} reaches height {:.6g} only".format(k, c))
    y = np.minimum(y, c)
    return np.sqrt(y * (c - y)) + c * np.arcsin(np.sqrt(y / c))
