# fptclock/clock/crossing.py
"""
Boundary crossing of a continuous local martingale through its clock.

By Dambis-Dubins-Schwarz, Z_t = B_{<Z>_t}, so with a constant boundary

    P(T^Z <= t) = P^W(<Z>_t)        f^Z(t) = <Z>'_t f^W(<Z>_t)

The random case averages these over a ScenarioSet.
"""

import logging
from typing import Optional

import numpy as np

from fptclock.clock.path import QuadraticVariationPath
from fptclock.errors import DomainError
from fptclock.types import (
    UNIT_BOUNDARY,
    FloatOrArray,
    OneSidedBoundary,
    ScenarioSet,
    SeriesControl,
    TwoSidedBoundary,
)
from fptclock.wiener.one_sided import levy_cdf, levy_pdf
from fptclock.wiener.two_sided import two_sided_cdf, two_sided_pdf

logger = logging.getLogger(__name__)

# ========== Nonrandom Clock ==========

def crossing_cdf_one_sided(
    path: QuadraticVariationPath, b: OneSidedBoundary, t: FloatOrArray
) -> FloatOrArray:
    return levy_cdf(b, path.value(t))


def crossing_pdf_one_sided(
    path: QuadraticVariationPath, b: OneSidedBoundary, t: FloatOrArray
) -> FloatOrArray:
    return path.derivative(t) * levy_pdf(b, path.value(t))


def crossing_cdf_two_sided(
    path: QuadraticVariationPath,
    b: TwoSidedBoundary,
    t: FloatOrArray,
    ctl: Optional[SeriesControl] = None,
) -> FloatOrArray:
    return two_sided_cdf(b, path.value(t), ctl)


def crossing_pdf_two_sided(
    path: QuadraticVariationPath,
    b: TwoSidedBoundary,
    t: FloatOrArray,
    ctl: Optional[SeriesControl] = None,
) -> FloatOrArray:
    return path.derivative(t) * two_sided_pdf(b, path.value(t), ctl)

# ========== Random Clock (Scenario Mixtures) ==========

def _require_kind(scenarios: ScenarioSet, one_sided: bool) -> None:
    for i, s in enumerate(scenarios.scenarios):
        if s.one_sided != one_sided:
            kind = "one-sided" if one_sided else "two-sided"
            raise DomainError(f"every scenario must carry a {kind} boundary", scenario_index=i)


def _weighted_sum(terms, weights: np.ndarray) -> FloatOrArray:
    total = sum(w * np.asarray(term) for w, term in zip(weights, terms))
    return float(total) if np.ndim(total) == 0 else total


def mixture_cdf_one_sided(scenarios: ScenarioSet, t: FloatOrArray) -> FloatOrArray:
    """sum_i w_i P_1^W(y_i(t)) with y = <Z/g> = <Z>/g^2."""
    _require_kind(scenarios, one_sided=True)
    unit = scenarios.normalized()
    terms = [levy_cdf(UNIT_BOUNDARY, s.clock.value(t)) for s in unit.scenarios]
    return _weighted_sum(terms, unit.weights)


def mixture_pdf_one_sided(scenarios: ScenarioSet, t: FloatOrArray) -> FloatOrArray:
    """sum_i w_i y_i'(t) f_1^W(y_i(t))."""
    _require_kind(scenarios, one_sided=True)
    unit = scenarios.normalized()
    terms = [
        s.clock.derivative(t) * levy_pdf(UNIT_BOUNDARY, s.clock.value(t))
        for s in unit.scenarios
    ]
    return _weighted_sum(terms, unit.weights)


def mixture_cdf_two_sided(
    scenarios: ScenarioSet, t: FloatOrArray, ctl: Optional[SeriesControl] = None
) -> FloatOrArray:
    """sum_i w_i P_{g_i,h_i}^W(z_i(t))."""
    _require_kind(scenarios, one_sided=False)
    terms = [crossing_cdf_two_sided(s.clock, s.boundary, t, ctl) for s in scenarios.scenarios]
    return _weighted_sum(terms, scenarios.weights)


def mixture_pdf_two_sided(
    scenarios: ScenarioSet, t: FloatOrArray, ctl: Optional[SeriesControl] = None
) -> FloatOrArray:
    """sum_i w_i z_i'(t) f_{g_i,h_i}^W(z_i(t))."""
    _require_kind(scenarios, one_sided=False)
    terms = [crossing_pdf_two_sided(s.clock, s.boundary, t, ctl) for s in scenarios.scenarios]
    return _weighted_sum(terms, scenarios.weights)


def mixture_cdf(
    scenarios: ScenarioSet, t: FloatOrArray, ctl: Optional[SeriesControl] = None
) -> FloatOrArray:
    """Dispatch on the boundary kind shared by all scenarios."""
    if scenarios.scenarios[0].one_sided:
        return mixture_cdf_one_sided(scenarios, t)
    return mixture_cdf_two_sided(scenarios, t, ctl)


def mixture_pdf(
    scenarios: ScenarioSet, t: FloatOrArray, ctl: Optional[SeriesControl] = None
) -> FloatOrArray:
    if scenarios.scenarios[0].one_sided:
        return mixture_pdf_one_sided(scenarios, t)
    return mixture_pdf_two_sided(scenarios, t, ctl)
