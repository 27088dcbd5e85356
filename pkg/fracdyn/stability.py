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

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List

import numpy as np

from fracdyn.frac_utils import DomainError, EigenConvergenceFailure, EvaluationRegionExceeded, FracOrder, \
    ModelRestriction, NonConvergence
from fracdyn.linode import CAPUTO, check_kind
from fracdyn.specialfn import MAX_TERMS, SERIES_BOUND, MLParams, mittag_leffler

__author__ = "fracdyn developers"

logger = logging.getLogger("frac.stability")

MARGINAL_TOL = 1e-12
MAX_DIMENSION = 8
PROBE_POINTS = 24
PROBE_EXPONENT_CAP = 60.0    # largest |lam t^alpha|^(1/alpha) visited by the probe off the negative axis


class Verdict(str, Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


_SEVERITY = {Verdict.STABLE: 0, Verdict.MARGINAL: 1, Verdict.UNSTABLE: 2}


def _sector_order(alpha):
    return FracOrder(alpha).check(0.0, 2.0, high_open=True)


def matignon_check(alpha, lam, tol=MARGINAL_TOL):
    """
    Sector condition |arg lam| > alpha pi/2 for the modes E_alpha(lam t^alpha)
    :return: Verdict. Points within tol of the sector boundary, and lam=0, are Marginal
    """
    alpha = _sector_order(alpha)
    lam = complex(lam)
    if lam == 0:
        return Verdict.MARGINAL
    margin = abs(cmath.phase(lam)) - alpha * math.pi / 2
    if margin > tol:
        return Verdict.STABLE
    if margin < -tol:
        return Verdict.UNSTABLE
    return Verdict.MARGINAL


@dataclass
class SpectrumReport:
    alpha: float
    eigenvalues: List[complex]
    verdicts: List[Verdict]
    verdict: Verdict = field(init=False)

    def __post_init__(self):
        self.verdict = max(self.verdicts, key=_SEVERITY.get) if self.verdicts else Verdict.STABLE

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "verdicts": [v.value for v in self.verdicts],
            "verdict": self.verdict.value,
        }


def eigenvalues(matrix):
    """Closed form for d <= 2, LAPACK otherwise"""
    a = np.asarray(matrix, dtype=float)
    d = a.shape[0]
    if d == 1:
        return [complex(a[0, 0])]
    if d == 2:
        half_trace = (a[0, 0] + a[1, 1]) / 2
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        disc = half_trace * half_trace - det
        if disc >= 0:
            root = math.sqrt(disc)
            return [complex(half_trace + root), complex(half_trace - root)]
        root = math.sqrt(-disc)
        return [complex(half_trace, root), complex(half_trace, -root)]
    try:
        return [complex(z) for z in np.linalg.eigvals(a)]
    except np.linalg.LinAlgError as e:
        raise EigenConvergenceFailure("eigenvalue iteration did not converge: {}".format(e))


def classify_system(alpha, matrix, kind=CAPUTO, tol=MARGINAL_TOL):
    """
    Stability of d u = A u for a real d x d matrix, d <= 8, by the sector test on every eigenvalue
    :return: SpectrumReport
    """
    alpha = _sector_order(alpha)
    if check_kind(kind) != CAPUTO:
        raise ModelRestriction("only the Caputo sector condition is implemented; a Riemann-Liouville criterion "
                               "is not available")
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or not 1 <= a.shape[0] <= MAX_DIMENSION:
        raise DomainError("system matrix must be square with dimension 1..{}, got shape {}".format(
            MAX_DIMENSION, a.shape))
    if not np.all(np.isfinite(a)):
        raise DomainError("system matrix entries must be finite")
    spectrum = eigenvalues(a)
    return SpectrumReport(float(alpha), spectrum, [matignon_check(alpha, z, tol) for z in spectrum])


def classify_spectrum(alpha, spectrum, tol=MARGINAL_TOL):
    """As classify_system for an already known list of eigenvalues"""
    alpha = _sector_order(alpha)
    spectrum = [complex(z) for z in spectrum]
    return SpectrumReport(float(alpha), spectrum, [matignon_check(alpha, z, tol) for z in spectrum])


def stability_region_sample(alpha, re_range, im_range, resolution=None, tol=MARGINAL_TOL):
    """
    Stable mask of the sector test over a rectangular sample of the complex plane
    :param re_range: (re0, re1) or (re0, re1, n)
    :param im_range: (im0, im1) or (im0, im1, n)
    :param resolution: points per axis when the ranges do not carry it
    :return: (re, im, mask) with mask[i, j] for re[j] + 1j*im[i]
    """
    alpha = _sector_order(alpha)
    axes = []
    for r in (re_range, im_range):
        low, high = r[0], r[1]
        n = int(r[2]) if len(r) > 2 else resolution
        if not n or n < 2 or not high > low:
            raise DomainError("sample range {} needs low < high and at least 2 points".format(r))
        axes.append(np.linspace(low, high, n))
    re, im = axes
    lam = re[None, :] + 1j * im[:, None]
    margin = np.abs(np.angle(lam)) - alpha * np.pi / 2
    mask = (margin > tol) & (lam != 0)
    return re, im, mask


def region_rows(re, im, mask):
    """(re, im, stable) rows for csv export"""
    rows = []
    for i, y in enumerate(im):
        for j, x in enumerate(re):
            rows.append((x, y, int(mask[i, j])))
    return rows


@dataclass
class ProbeResult:
    trend: str
    t_reached: float
    truncated: bool
    times: np.ndarray
    magnitudes: np.ndarray


def ml_decay_probe(alpha, lam, t_max, points=PROBE_POINTS, series_bound=SERIES_BOUND, max_terms=MAX_TERMS):
    """
    Samples |E_alpha(lam t^alpha)| on a log spaced grid up to t_max and reports the trend of its tail.
    Off the negative real axis the grid stops where the series stays affordable; the result is then truncated
    :return: ProbeResult with trend 'decays' or 'grows'
    """
    alpha = FracOrder(alpha).check(0.0, 1.0)
    lam = complex(lam)
    if not t_max > 0:
        raise DomainError("probe horizon must be positive, got {}".format(t_max))
    if lam == 0:
        return ProbeResult("decays", t_max, False, np.array([t_max]), np.array([1.0]))
    t_end = t_max
    truncated = False
    negative_axis = lam.imag == 0 and lam.real < 0
    if not negative_axis:
        z_cap = min(series_bound, PROBE_EXPONENT_CAP ** alpha)
        t_cap = (z_cap / abs(lam)) ** (1.0 / alpha)
        if t_cap < t_end:
            t_end = t_cap
            truncated = True
    times = np.geomspace(t_end * 1e-3, t_end, points)
    params = MLParams(alpha, 1.0)
    magnitudes = []
    reached = []
    for t in times:
        try:
            magnitudes.append(abs(mittag_leffler(params, lam * t ** alpha, series_bound=series_bound,
                                                 max_terms=max_terms)))
        except (EvaluationRegionExceeded, NonConvergence) as e:
            logger.debug("probe stopped at t={}: {}".format(t, e))
            truncated = True
            break
        reached.append(t)
    if len(reached) < 2:
        raise EvaluationRegionExceeded("probe could not sample E_alpha(lam t^alpha) for lam={}".format(lam))
    magnitudes = np.array(magnitudes)
    tail_start = magnitudes[len(magnitudes) // 2]
    grows = magnitudes[-1] > 1 and magnitudes[-1] > tail_start
    if truncated:
        logger.info("probe for alpha={} lam={} truncated at t={:.6g}".format(float(alpha), lam, reached[-1]))
    return ProbeResult("grows" if grows else "decays", float(reached[-1]), truncated, np.array(reached), magnitudes)
