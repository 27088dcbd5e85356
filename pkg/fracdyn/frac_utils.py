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

import math
from dataclasses import dataclass, field

import numpy as np

__author__ = "fracdyn developers"


class FracException(Exception):
    """
    Base class of every error raised by the toolkit.
    exit_code is the process status the command line front end returns for it.
    """
    exit_code = 4

    def __init__(self, message, step=None):
        self.step = step
        Exception.__init__(self, message)


class DomainError(FracException):
    exit_code = 2


class NonPositiveIntegerPole(DomainError):
    pass


class DegenerateGrid(DomainError):
    pass


class InconsistentArcLength(DomainError):
    pass


class EvaluationRegionExceeded(DomainError):
    pass


class ModelRestriction(FracException):
    exit_code = 3


class NonConvergence(FracException):
    pass


class RhsEvaluationError(FracException):
    pass


class NonlinearSolveFailure(FracException):
    pass


class SolverOverflow(FracException):
    pass


class EigenConvergenceFailure(FracException):
    pass


class FracOrder(float):
    """
    A fractional order alpha. Behaves as a float; check() validates it against the range required by the caller
    """

    def __new__(cls, value):
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise DomainError("order '{}' is not a real number".format(value))
        if not math.isfinite(value) or value < 0:
            raise DomainError("order must be a finite non negative real, got {}".format(value))
        return super().__new__(cls, value)

    def check(self, low=0.0, high=None, low_open=True, high_open=False):
        """
        Validates the order is inside the interval (low, high]. Openness of each side is configurable
        :return: self, so it can be chained as FracOrder(a).check(0, 1)
        """
        low_ok = self > low if low_open else self >= low
        high_ok = high is None or (self < high if high_open else self <= high)
        if not (low_ok and high_ok):
            raise DomainError("order {} outside of {}{}, {}{}".format(
                float(self), "(" if low_open else "[", low, "inf" if high is None else high,
                ")" if high_open or high is None else "]"))
        return self


@dataclass(frozen=True)
class UniformGrid:
    """Mesh t_k = k*tau for k = 0..n_steps"""
    tau: float
    n_steps: int

    def __post_init__(self):
        if not (isinstance(self.tau, (int, float)) and math.isfinite(self.tau) and self.tau > 0):
            raise DegenerateGrid("grid step must be a positive finite real, got {}".format(self.tau))
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise DegenerateGrid("grid must have at least one step, got {}".format(self.n_steps))
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @classmethod
    def from_horizon(cls, horizon, tau):
        """Builds the grid covering [0, horizon]; horizon must be a multiple of tau within 1e-9 relative"""
        if not (tau > 0 and horizon > 0):
            raise DegenerateGrid("horizon {} and step {} must be positive".format(horizon, tau))
        n_steps = int(round(horizon / tau))
        if n_steps < 1 or abs(n_steps * tau - horizon) > 1e-9 * horizon:
            raise DegenerateGrid("horizon {} is not a multiple of step {}".format(horizon, tau))
        return cls(tau, n_steps)

    @classmethod
    def from_nodes(cls, nodes, rtol=1e-9):
        """Recovers the grid from sampled node times, that must start at 0 and be uniform within rtol"""
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 1 or len(nodes) < 2:
            raise DegenerateGrid("at least two nodes are needed to build a grid")
        tau = (nodes[-1] - nodes[0]) / (len(nodes) - 1)
        grid = cls(tau, len(nodes) - 1)
        scale = max(abs(nodes[-1]), tau)
        if abs(nodes[0]) > rtol * scale or np.max(np.abs(nodes - grid.nodes)) > rtol * scale:
            raise DegenerateGrid("nodes are not a uniform grid starting at 0")
        return grid

    @property
    def t_end(self):
        return self.tau * self.n_steps

    @property
    def node_count(self):
        return self.n_steps + 1

    @property
    def nodes(self):
        return self.tau * np.arange(self.n_steps + 1, dtype=float)


@dataclass(frozen=True)
class SampledFunction:
    """
    Samples f(t_k) over a grid. values has shape (n_steps+1,) or (n_steps+1, d).
    When singular_origin is set node 0 holds a nan sentinel
    """
    grid: UniformGrid
    values: np.ndarray
    singular_origin: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim not in (1, 2) or values.shape[0] != self.grid.node_count:
            raise DomainError("{} samples do not match a grid of {} nodes".format(values.shape[0] if values.ndim
                                                                                   else 0, self.grid.node_count))
        checked = values[1:] if self.singular_origin else values
        if not np.all(np.isfinite(checked)):
            raise DomainError("sampled values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, func, grid):
        """Samples func at every grid node"""
        return cls(grid, np.array([func(t) for t in grid.nodes], dtype=float))


@dataclass
class SolutionPath:
    """
    Grid aligned solution states with shape (n_steps+1, d).
    meta keeps method, alpha, kind, flags and seed when stochastic
    """
    grid: UniformGrid
    states: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def dimension(self):
        return self.states.shape[1]

    @property
    def values(self):
        """First component, the whole solution of scalar problems"""
        return self.states[:, 0]

    @property
    def singular_origin(self):
        return "singular_origin" in self.meta.get("flags", ())

    def as_sampled(self, component=0):
        return SampledFunction(self.grid, self.states[:, component], singular_origin=self.singular_origin)


def deep_get(target_dict, key_list, default_value=None):
    """
    Get a value from target_dict entering in the nested keys. If keys does not exist, it returns default_value
    Example target_dict={a: {b: 5}}; key_list=[a,b] returns 5; both key_list=[a,b,c] and key_list=[f,h] return None
    :param target_dict: dictionary to be read
    :param key_list: list of keys to read from  target_dict
    :param default_value: value to return if key is not present in the nested dictionary
    :return: The wanted value if exist, default_value otherwise
    """
    for key in key_list:
        if not isinstance(target_dict, dict) or key not in target_dict:
            return default_value
        target_dict = target_dict[key]
    return target_dict


def populate_dict(target_dict, key_list, value):
    """
    Update target_dict creating nested dictionaries with the key_list. Last key_list item is asigned the value.
    Example target_dict={K: J}; key_list=[a,b,c];  target_dict will be {K: J, a: {b: {c: value}}}
    :param target_dict: dictionary to be changed
    :param key_list: list of keys to insert at target_dict
    :param value:
    :return: None
    """
    for key in key_list[0:-1]:
        if key not in target_dict:
            target_dict[key] = {}
        target_dict = target_dict[key]
    target_dict[key_list[-1]] = value


def near_nonpositive_integer(z, tol):
    """True when z is within tol of one of 0, -1, -2, ..."""
    nearest = round(z)
    return nearest <= 0 and abs(z - nearest) <= tol
