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
Seeded Monte Carlo for the asset S and the variance V:
    geometric Brownian motion, S_{n+1} = S_n (1 + mu tau + sigma sqrt(tau) X_n)
    classical Heston,          V_{n+1} = V_n + kappa (theta - V_n+) tau + xi sqrt(V_n+ tau) Z_n
    rough Heston,              V_{n+1} = V0 + sum_k kappa (theta - V_k+) w[n+1][k] + sum_k xi sqrt(V_k+) b[n+1][k] Z_k
with V+ = max(V, 0). Full truncation puts V+ in the drift and in the diffusion; partial truncation keeps the raw V
in the drift, so the mean of V follows the deterministic scheme exactly. Variance statistics are taken on the variance
the drift acts on, V+ under full truncation and V under partial truncation.
Every path draws from its own generator spawned from (seed, path index), so results do not depend on batching.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from fracdyn.frac_utils import DegenerateGrid, DomainError, FracOrder, UniformGrid
from fracdyn.solver import kernel_weights
from fracdyn.specialfn import gamma

__author__ = "fracdyn developers"

logger = logging.getLogger("frac.roughheston")

BATCH_PATHS = 1024
MODELS = ("rough", "classical", "gbm")
TRUNCATIONS = ("full", "partial")


@dataclass(frozen=True)
class RoughHestonParams:
    """xi defaults to kappa, so the noise amplitude equals the mean reversion rate"""
    V0: float = 0.09
    kappa: float = 2.0
    theta: float = 0.04
    xi: Optional[float] = None
    alpha: float = 0.6
    rho: float = 0.0
    S0: float = 100.0
    mu: float = 0.0

    def __post_init__(self):
        if self.xi is None:
            object.__setattr__(self, "xi", self.kappa)
        values = {k: getattr(self, k) for k in ("V0", "kappa", "theta", "xi", "alpha", "rho", "S0", "mu")}
        for k, v in values.items():
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise DomainError("parameter {} must be a finite real, got {}".format(k, v))
        if self.V0 < 0 or self.theta < 0 or self.xi < 0:
            raise DomainError("V0, theta and xi must be non negative")
        if not self.kappa > 0:
            raise DomainError("kappa must be positive, got {}".format(self.kappa))
        if not -1 <= self.rho <= 1:
            raise DomainError("rho must lie in [-1, 1], got {}".format(self.rho))
        if not self.S0 > 0:
            raise DomainError("S0 must be positive, got {}".format(self.S0))
        object.__setattr__(self, "alpha", FracOrder(self.alpha).check(0.0, 1.0))

    def as_dict(self):
        return {"V0": self.V0, "kappa": self.kappa, "theta": self.theta, "xi": self.xi, "alpha": float(self.alpha),
                "rho": self.rho, "S0": self.S0, "mu": self.mu}


@dataclass(frozen=True)
class McRun:
    params: RoughHestonParams
    grid: UniformGrid
    n_paths: int = 10000
    seed: int = 0
    keep_paths: bool = False
    truncation: str = "full"

    def __post_init__(self):
        if self.truncation not in TRUNCATIONS:
            raise DomainError("unknown truncation '{}', use one of {}".format(self.truncation,
                                                                               ", ".join(TRUNCATIONS)))
        if not isinstance(self.grid, UniformGrid):
            raise DegenerateGrid("a uniform grid is required")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise DomainError("at least one path is needed, got {}".format(self.n_paths))
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be a 64 bit unsigned integer, got {}".format(self.seed))


@dataclass
class McStatistics:
    """
    Per node sample mean and standard deviation of V and S. V statistics are those of the variance seen by the drift;
    the kept paths hold the raw variance state
    """
    model: str
    t: np.ndarray
    mean_V: np.ndarray
    sd_V: np.ndarray
    mean_S: np.ndarray
    sd_S: np.ndarray
    n_paths: int
    seed: int
    V: Optional[np.ndarray] = field(default=None, repr=False)
    S: Optional[np.ndarray] = field(default=None, repr=False)

    def standard_error_V(self):
        return self.sd_V / math.sqrt(self.n_paths)

    def standard_error_S(self):
        return self.sd_S / math.sqrt(self.n_paths)

    def rows(self):
        return list(zip(self.t, self.mean_V, self.sd_V, self.mean_S, self.sd_S))


def drift_weights(alpha, grid):
    """Lags of w[n][k], the product integration weights shared with the solver"""
    return kernel_weights(alpha, grid).lags


def noise_weights(alpha, grid):
    """
    Lags of b[n][k] = sqrt(int over cell k of K_alpha(t_n - s)^2 ds), closed form with exponent 2 alpha - 1
    """
    alpha = FracOrder(alpha).check(0.5, 1.0)
    exponent = 2 * alpha - 1
    powers = np.arange(grid.n_steps + 1, dtype=float) ** exponent
    scale = grid.tau ** exponent / (exponent * gamma(alpha) ** 2)
    return np.sqrt(scale * np.diff(powers))


def path_generators(seed, n_paths):
    """One independent generator per path"""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_paths)]


def draw_increments(generators, n_steps, rho):
    """
    Standard normal increments of the variance noise B and of the correlated asset noise W = rho B + sqrt(1-rho^2) B'
    :return: (dB, dW) arrays of shape (len(generators), n_steps)
    """
    normals = np.empty((len(generators), 2, n_steps))
    for i, rng in enumerate(generators):
        normals[i] = rng.standard_normal((2, n_steps))
    db = normals[:, 0, :]
    dw = rho * db + math.sqrt(1.0 - rho * rho) * normals[:, 1, :]
    return db, dw


def _column_statistics(values):
    n = values.shape[0]
    mean = np.array([math.fsum(col) / n for col in values.T])
    if n < 2:
        return mean, np.zeros_like(mean)
    sd = np.array([math.sqrt(math.fsum((col - m) ** 2) / (n - 1)) for col, m in zip(values.T, mean)])
    return mean, sd


def _asset_step(s, v_plus, mu, tau, dw):
    return s * (1.0 + mu * tau + np.sqrt(v_plus * tau) * dw)


def _simulate(run, model):
    p = run.params
    grid = run.grid
    n_steps = grid.n_steps
    tau = grid.tau
    if model == "rough":
        lags = drift_weights(p.alpha, grid)
        noise = noise_weights(p.alpha, grid)
    full = run.truncation == "full"
    generators = path_generators(run.seed, run.n_paths)
    v_all = np.empty((run.n_paths, grid.node_count))
    s_all = np.empty((run.n_paths, grid.node_count))
    logger.debug("{} simulation paths={} steps={} seed={} truncation={}".format(model, run.n_paths, n_steps, run.seed,
                                                                              run.truncation))
    for start in range(0, run.n_paths, BATCH_PATHS):
        batch = generators[start:start + BATCH_PATHS]
        db, dw = draw_increments(batch, n_steps, p.rho)
        size = len(batch)
        v = np.empty((size, grid.node_count))
        s = np.empty((size, grid.node_count))
        v[:, 0] = p.V0
        s[:, 0] = p.S0
        if model == "gbm":
            sigma = math.sqrt(p.V0)
            for n in range(n_steps):
                v[:, n + 1] = p.V0
                s[:, n + 1] = s[:, n] * (1.0 + p.mu * tau + sigma * math.sqrt(tau) * db[:, n])
        elif model == "classical":
            for n in range(n_steps):
                v_plus = np.maximum(v[:, n], 0.0)
                v_drift = v_plus if full else v[:, n]
                v[:, n + 1] = v[:, n] + p.kappa * (p.theta - v_drift) * tau + p.xi * np.sqrt(v_plus * tau) * db[:, n]
                s[:, n + 1] = _asset_step(s[:, n], v_plus, p.mu, tau, dw[:, n])
        else:
            drift = np.empty((size, n_steps))
            shock = np.empty((size, n_steps))
            for n in range(n_steps):
                v_plus = np.maximum(v[:, n], 0.0)
                drift[:, n] = p.kappa * (p.theta - (v_plus if full else v[:, n]))
                shock[:, n] = p.xi * np.sqrt(v_plus) * db[:, n]
                v[:, n + 1] = p.V0 + drift[:, :n + 1] @ lags[n::-1] + shock[:, :n + 1] @ noise[n::-1]
                s[:, n + 1] = _asset_step(s[:, n], v_plus, p.mu, tau, dw[:, n])
        v_all[start:start + size] = v
        s_all[start:start + size] = s
    mean_v, sd_v = _column_statistics(np.maximum(v_all, 0.0) if full else v_all)
    mean_s, sd_s = _column_statistics(s_all)
    return McStatistics(model, grid.nodes, mean_v, sd_v, mean_s, sd_s, run.n_paths, run.seed,
                        v_all if run.keep_paths else None, s_all if run.keep_paths else None)


def simulate_gbm(run):
    """Asset under constant volatility sigma = sqrt(V0)"""
    return _simulate(run, "gbm")


def simulate_classical_heston(run):
    return _simulate(run, "classical")


def simulate_rough_heston(run):
    """Volterra Euler scheme for the fractional variance, alpha in (0.5, 1]"""
    if not run.params.alpha > 0.5:
        raise DomainError("rough Heston needs alpha > 0.5, the squared kernel is not integrable for alpha={}".format(
            float(run.params.alpha)))
    return _simulate(run, "rough")


def simulate(run, model="rough"):
    if model == "rough":
        return simulate_rough_heston(run)
    if model == "classical":
        return simulate_classical_heston(run)
    if model == "gbm":
        return simulate_gbm(run)
    raise DomainError("unknown model '{}', use one of {}".format(model, ", ".join(MODELS)))
