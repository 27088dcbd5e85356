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
Gamma, Beta and Mittag-Leffler functions.

E_{alpha,beta}(z) is summed as a power series in mpmath at a working precision chosen from the size of the largest
term, so that cancellation on the negative real axis does not eat the result. Deep on the negative real axis the
algebraic tail expansion is used instead.
"""

import functools
import logging
import math
import sys
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

from fracdyn.frac_utils import (DomainError, EvaluationRegionExceeded, FracOrder, NonConvergence,
                                NonPositiveIntegerPole, near_nonpositive_integer)

__author__ = "fracdyn developers"

logger = logging.getLogger("frac.specialfn")

SERIES_BOUND = 40.0     # |z| supported by the power series
TAIL_SWITCH = 40.0      # |z|**(1/alpha) from which the negative real tail expansion replaces the series
MAX_TERMS = 10000
STOP_RUN = 10           # consecutive negligible terms needed to stop the series
STOP_TOL = 1e-16
POLE_TOL = 1e-9
GUARD_DIGITS = 20
_BLOCK = 64
_MAX_TAIL_TERMS = 2000


def gamma(z):
    """
    Gamma function. Arguments below 0.5 are brought up with Gamma(z) = Gamma(z+1)/z
    :param z: real, not a non positive integer
    :return: Gamma(z) as float
    """
    z = float(z)
    if not math.isfinite(z):
        raise DomainError("Gamma argument must be finite, got {}".format(z))
    if near_nonpositive_integer(z, 4 * sys.float_info.epsilon * max(1.0, abs(z))):
        raise NonPositiveIntegerPole("Gamma has a pole at {}".format(z))
    if z >= 0.5:
        if z == int(z) and z <= 171:
            return float(math.factorial(int(z) - 1))
        return float(special.gamma(z))
    divisor = 1.0
    shifted = z
    while shifted < 0.5:
        divisor *= shifted
        shifted += 1.0
    return float(special.gamma(shifted)) / divisor


def rgamma(z, pole_tol=POLE_TOL):
    """1/Gamma(z), taken as 0 when z is within pole_tol of a non positive integer"""
    if near_nonpositive_integer(z, pole_tol):
        return 0.0
    return float(special.rgamma(z))


def gamma_ratio(num, den, pole_tol=POLE_TOL):
    """
    Gamma(num)/Gamma(den). A pole of the denominator makes the ratio 0; a pole of the numerator is a DomainError
    """
    if near_nonpositive_integer(num, pole_tol):
        raise DomainError("Gamma({}) in a numerator is infinite".format(num))
    if near_nonpositive_integer(den, pole_tol):
        return 0.0
    if max(abs(num), abs(den)) < 170:
        return gamma(num) / gamma(den)
    sign = special.gammasgn(num) * special.gammasgn(den)
    return float(sign * math.exp(special.gammaln(num) - special.gammaln(den)))


def beta(z1, z2):
    """Euler Beta function Gamma(z1)Gamma(z2)/Gamma(z1+z2) for positive arguments"""
    if not (z1 > 0 and z2 > 0):
        raise DomainError("Beta is defined for positive arguments, got ({}, {})".format(z1, z2))
    if z1 + z2 < 170:
        return gamma(z1) * gamma(z2) / gamma(z1 + z2)
    return float(special.beta(z1, z2))


@dataclass(frozen=True)
class MLParams:
    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError("Mittag-Leffler {} must be a positive real, got {}".format(name, value))
            object.__setattr__(self, name, float(value))


@functools.lru_cache(maxsize=512)
def _working_dps(alpha, beta, radius):
    """Decimal digits needed to sum the series for |z| <= radius. Rounded up to tens to share coefficient tables"""
    peak = 0.0
    if radius > 0:
        reach = math.exp(min(math.log(radius) / alpha, 20.0))
        n = np.arange(int(min(MAX_TERMS, 4 * reach / alpha + 64)), dtype=float)
        logs = n * math.log(radius) - special.gammaln(alpha * n + beta)
        peak = max(0.0, float(np.max(logs))) / math.log(10)
    digits = 2 * peak + GUARD_DIGITS
    return int(10 * math.ceil(digits / 10))


@functools.lru_cache(maxsize=256)
def _coefficient_block(alpha, beta, dps, block):
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha)
        b = mpmath.mpf(beta)
        return tuple(mpmath.rgamma(a * n + b) for n in range(block * _BLOCK, (block + 1) * _BLOCK))


def _series(p, z, max_terms):
    dps = _working_dps(p.alpha, p.beta, math.ceil(abs(z) * 64) / 64)
    real_input = z.imag == 0.0
    with mpmath.workdps(dps):
        x = mpmath.mpf(z.real) if real_input else mpmath.mpc(z.real, z.imag)
        floor = mpmath.mpf("1e-300")
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        quiet = 0
        for n in range(max_terms):
            term = power * _coefficient_block(p.alpha, p.beta, dps, n // _BLOCK)[n % _BLOCK]
            total += term
            if abs(term) <= STOP_TOL * abs(total) + floor:
                quiet += 1
                if quiet >= STOP_RUN:
                    break
            else:
                quiet = 0
            power *= x
        else:
            raise NonConvergence("Mittag-Leffler series for alpha={} beta={} z={} did not converge in {} terms"
                                 .format(p.alpha, p.beta, z, max_terms))
        if real_input:
            return complex(float(total), 0.0)
        return complex(total)


def _negative_tail(p, x):
    """
    Algebraic expansion -sum_k x^-k / Gamma(beta - alpha k) for x << 0 and alpha <= 1. The terms oscillate, so the
    sum is cut where their bound Gamma(1 - beta + alpha k) / (pi |x|^k) is smallest
    """
    log_x = math.log(-x)
    terms = []
    previous = math.inf
    for k in range(1, _MAX_TAIL_TERMS):
        coefficient = rgamma(p.beta - p.alpha * k)
        shift = 1 - p.beta + p.alpha * k
        if shift > 0:
            bound = math.exp(special.gammaln(shift) - k * log_x) / math.pi
            if bound > previous:
                break
            previous = bound
        else:
            bound = abs(coefficient) * math.exp(-k * log_x)
        if coefficient != 0.0:
            terms.append(-coefficient * x ** (-k))
        if terms and bound <= STOP_TOL * abs(math.fsum(terms)):
            break
    if p.alpha == 1 and p.beta == int(p.beta):
        # exponential part, real on the negative axis for integer beta
        terms.append(math.exp(x) * x ** (1 - int(p.beta)))
    logger.debug("tail expansion alpha={} beta={} x={} terms={}".format(p.alpha, p.beta, x, len(terms)))
    return math.fsum(terms)


def mittag_leffler(p, z, series_bound=SERIES_BOUND, max_terms=MAX_TERMS):
    """
    Two parameter Mittag-Leffler function E_{alpha,beta}(z) = sum z^n / Gamma(alpha n + beta)
    :param p: MLParams or an (alpha, beta) tuple
    :param z: complex argument
    :param series_bound: largest |z| summed by the series
    :param max_terms: series term cap
    :return: complex value. Real arguments give an imaginary part exactly 0
    """
    if not isinstance(p, MLParams):
        p = MLParams(*p)
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("Mittag-Leffler argument must be finite, got {}".format(z))
    radius = abs(z)
    if z.imag == 0.0 and z.real < 0 and p.alpha <= 1:
        if radius > series_bound or (p.alpha < 1 and radius ** (1.0 / p.alpha) >= TAIL_SWITCH):
            return complex(_negative_tail(p, z.real), 0.0)
    if radius > series_bound:
        raise EvaluationRegionExceeded("|z|={:.6g} is beyond the supported bound {} for alpha={} beta={}"
                                       .format(radius, series_bound, p.alpha, p.beta))
    return _series(p, z, max_terms)


def mittag_leffler_values(p, zs, **kwargs):
    """mittag_leffler evaluated element-wise; returns a complex array shaped as zs"""
    zs = np.asarray(zs)
    out = np.array([mittag_leffler(p, z, **kwargs) for z in zs.ravel()], dtype=complex)
    return out.reshape(zs.shape)


def p_alpha(t, alpha, lam, **kwargs):
    """
    Kernel P_alpha(t; -lam) = t^(alpha-1) E_{alpha,alpha}(lam t^alpha)
    :param t: time, positive. t=0 only allowed for alpha=1
    :param alpha: order in (0, 1]
    :param lam: complex rate
    :return: complex value
    """
    alpha = FracOrder(alpha).check(0.0, 1.0)
    if not (t > 0 or (t == 0 and alpha == 1)):
        raise DomainError("P_alpha is singular at t={} for alpha={}".format(t, float(alpha)))
    return t ** (alpha - 1) * mittag_leffler(MLParams(alpha, alpha), lam * t ** alpha, **kwargs)
