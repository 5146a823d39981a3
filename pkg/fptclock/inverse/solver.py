# fptclock/inverse/solver.py
"""
Inverse first-passage problem over the clock.

Given a target cdf F, the clock v_F(t) = (P^W)^{-1}(F(t)) 1{0 < F(t) < 1} is the
only nondecreasing clock whose crossing cdf is F. Given a target pdf f, the spot
variance sigma^2(t) = f(t) / f^W((P^W)^{-1}(F(t))) 1{0 < F(t) < 1} does the same for
absolutely continuous clocks. Both need F < 1 for all finite t (k1 = +inf).

On grids the solution property holds knotwise; between knots it holds up to the
interpolation of the target.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence

import numpy as np

from fptclock.clock.path import GridClock
from fptclock.constants import INTEGRABILITY_RTOL, NEAR_SATURATION_EPS, SATURATION_EPS
from fptclock.errors import AssumptionError, FptError, SaturationError
from fptclock.types import (
    UNIT_BOUNDARY,
    Boundary,
    InverseReport,
    OneSidedBoundary,
    Scenario,
    ScenarioSet,
    SeriesControl,
    SupportThresholds,
    SurvivalCdf,
    SurvivalPdf,
    TwoSidedBoundary,
    VarianceSolution,
)
from fptclock.wiener.one_sided import levy_cdf_inverse, levy_pdf_at_inverse
from fptclock.wiener.two_sided import two_sided_cdf_inverse, two_sided_pdf

logger = logging.getLogger(__name__)

InverseFn = Callable[[np.ndarray], np.ndarray]

# ========== Thresholds & Assumptions ==========

def support_thresholds(F: SurvivalCdf) -> SupportThresholds:
    """
    k0 = inf{t > 0 : F(t) > 0}, k1 = inf{t > 0 : F(t) = 1} on the linear interpolant.

    F leaves 0 right after the knot preceding the first positive knot and reaches 1
    exactly at the first knot equal to 1.
    """
    t, values = F.t, F.F
    positive = np.flatnonzero(values > 0)
    k0 = math.inf if positive.size == 0 else float(t[positive[0] - 1])
    full = np.flatnonzero(values >= 1.0)
    k1 = math.inf if full.size == 0 else float(t[full[0]])
    return SupportThresholds(k0=k0, k1=k1)


def _pdf_at_inverse_fn(b: Boundary, ctl: Optional[SeriesControl]) -> InverseFn:
    if isinstance(b, OneSidedBoundary):
        return lambda p: levy_pdf_at_inverse(b, p)
    return lambda p: two_sided_pdf(b, two_sided_cdf_inverse(b, p, ctl), ctl)


def _variance_at(f: np.ndarray, F: np.ndarray, pdf_at_inverse: InverseFn) -> np.ndarray:
    inside = (F > 0) & (F < 1)
    sigma2 = np.zeros(F.shape)
    if np.any(inside):
        denom = np.asarray(pdf_at_inverse(F[inside]), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            sigma2[inside] = np.where(f[inside] > 0, f[inside] / denom, 0.0)
    return sigma2


def local_integrability(
    f: SurvivalPdf,
    b: Boundary,
    ctl: Optional[SeriesControl] = None,
    eta: Optional[float] = None,
) -> bool:
    """
    Refinement check of int sigma^2 over [k0, k0 + eta].

    One midpoint panel is compared with two; sigma^2 at interior points uses the
    pdf and cdf interpolated linearly. The midpoint rule never evaluates the
    indicator zero at k0 itself. Passes iff both sums are finite and agree within
    INTEGRABILITY_RTOL.
    """
    F = f.cdf()
    k0 = support_thresholds(F).k0
    if math.isinf(k0):
        return True
    t = f.t
    i0 = int(np.searchsorted(t, k0))
    if eta is None:
        eta = float(t[i0 + 1] - t[i0])
    eta = min(eta, float(t[-1]) - k0)

    nodes = k0 + eta * np.array([0.5, 0.25, 0.75])
    sigma2 = _variance_at(
        np.interp(nodes, t, f.f), np.interp(nodes, t, F.F), _pdf_at_inverse_fn(b, ctl)
    )
    coarse = eta * sigma2[0]
    fine = 0.5 * eta * (sigma2[1] + sigma2[2])
    if not (math.isfinite(coarse) and math.isfinite(fine)):
        return False
    scale = max(abs(coarse), abs(fine))
    ok = bool(scale == 0.0 or abs(fine - coarse) <= INTEGRABILITY_RTOL * scale)
    logger.debug(f"local integrability on [{k0:g}, {k0 + eta:g}]: {coarse:.6g} vs {fine:.6g} -> {ok}")
    return ok


def inspect_target(
    F: SurvivalCdf,
    b: Optional[Boundary] = None,
    f: Optional[SurvivalPdf] = None,
    ctl: Optional[SeriesControl] = None,
    eta: Optional[float] = None,
) -> InverseReport:
    """Assumption report for a target; never raises on a failed assumption."""
    thresholds = support_thresholds(F)
    values = F.F
    saturated = int(np.count_nonzero((values >= 1.0 - SATURATION_EPS) & (values < 1.0)))
    clamped = int(np.count_nonzero((values >= 1.0 - NEAR_SATURATION_EPS) & (values < 1.0)))
    integrable = None
    if f is not None and b is not None and not thresholds.k1_finite and saturated == 0:
        integrable = local_integrability(f, b, ctl, eta)
    return InverseReport(
        thresholds=thresholds,
        assumption_k1_infinite=not thresholds.k1_finite,
        local_integrability_ok=integrable,
        clamped_knots=clamped,
        repaired_knots=F.repaired_knots,
        saturated_knots=saturated,
        n_knots=len(F.times),
    )


def _require_solvable(F: SurvivalCdf) -> SupportThresholds:
    thresholds = support_thresholds(F)
    if thresholds.k1_finite:
        raise AssumptionError(
            f"target cdf reaches 1 at t={thresholds.k1:g}; k1 must be infinite"
        )
    values = F.F
    saturated = np.flatnonzero(values >= 1.0 - SATURATION_EPS)
    if saturated.size:
        first = int(saturated[0])
        raise SaturationError(
            f"{saturated.size} knot(s) within {SATURATION_EPS:g} of 1, first at t={F.t[first]:g}; "
            "trim the grid"
        )
    near = int(np.count_nonzero(values >= 1.0 - NEAR_SATURATION_EPS))
    if near:
        logger.warning(f"⚠️ {near} knot(s) within {NEAR_SATURATION_EPS:g} of 1; the clock is steep there")
    return thresholds

# ========== Deterministic Clock ==========

def _clock_from_cdf(F: SurvivalCdf, invert: InverseFn) -> GridClock:
    _require_solvable(F)
    values = F.F
    inside = (values > 0) & (values < 1)
    clock = np.zeros(values.shape)
    if np.any(inside):
        clock[inside] = invert(values[inside])
    # root-finder noise must not break monotonicity between nearly equal targets
    clock = np.maximum.accumulate(clock)
    logger.info(f"solved clock on {values.size} knots ({int(inside.sum())} inside 0 < F < 1)")
    return GridClock(F.t, clock)


def qv_solution_one_sided(F: SurvivalCdf, b: OneSidedBoundary) -> GridClock:
    """v_F(t) = g^2 / (2 erfinv(1 - F(t))^2) 1{0 < F(t) < 1}."""
    return _clock_from_cdf(F, lambda p: levy_cdf_inverse(b, p))


def qv_solution_two_sided(
    F: SurvivalCdf, b: TwoSidedBoundary, ctl: Optional[SeriesControl] = None
) -> GridClock:
    """v_F(t) = (P_{g,h}^W)^{-1}(F(t)) 1{0 < F(t) < 1}."""
    return _clock_from_cdf(F, lambda p: two_sided_cdf_inverse(b, p, ctl))

# ========== Deterministic Spot Variance ==========

def _variance_from_pdf(
    f: SurvivalPdf,
    b: Boundary,
    ctl: Optional[SeriesControl],
    eta: Optional[float],
) -> VarianceSolution:
    F = f.cdf()
    _require_solvable(F)
    if not local_integrability(f, b, ctl, eta):
        raise AssumptionError(
            "spot variance is not locally integrable after k0 (refinement check failed)"
        )
    sigma2 = _variance_at(f.f, F.F, _pdf_at_inverse_fn(b, ctl))
    if not np.all(np.isfinite(sigma2)):
        bad = int(np.argmax(~np.isfinite(sigma2)))
        raise AssumptionError(f"spot variance is not finite at t={f.t[bad]:g}")
    return VarianceSolution(times=f.times, sigma2=tuple(sigma2.tolist()))


def variance_solution_one_sided(
    f: SurvivalPdf, b: OneSidedBoundary, eta: Optional[float] = None
) -> VarianceSolution:
    """sigma^2 = f / f_g^W((P_g^W)^{-1}(F)) 1{0 < F < 1}."""
    return _variance_from_pdf(f, b, None, eta)


def variance_solution_two_sided(
    f: SurvivalPdf,
    b: TwoSidedBoundary,
    ctl: Optional[SeriesControl] = None,
    eta: Optional[float] = None,
) -> VarianceSolution:
    """sigma^2 = f / f_{g,h}^W((P_{g,h}^W)^{-1}(F)) 1{0 < F < 1}."""
    return _variance_from_pdf(f, b, ctl, eta)

# ========== Random Case ==========

def _tag(e: FptError, index: int) -> FptError:
    return type(e)(e.message, scenario_index=index)


def qv_solution_random(
    targets: Sequence[SurvivalCdf],
    boundaries: Sequence[Boundary],
    weights: Optional[Sequence[float]] = None,
    ctl: Optional[SeriesControl] = None,
) -> ScenarioSet:
    """
    Solve each scenario's target independently.

    One-sided scenarios are solved for Y = Z/g against the unit boundary and
    returned as <Z> = g^2 <Y> next to their own boundary.
    """
    if len(targets) != len(boundaries):
        raise ValueError("one boundary per scenario target is required")
    if weights is None:
        weights = [1.0 / len(targets)] * len(targets)

    scenarios = []
    for i, (F, b) in enumerate(zip(targets, boundaries)):
        try:
            if isinstance(b, OneSidedBoundary):
                y = qv_solution_one_sided(F, UNIT_BOUNDARY)
                clock = GridClock(y.times, b.g ** 2 * y.values)
            else:
                clock = qv_solution_two_sided(F, b, ctl)
        except FptError as e:
            raise _tag(e, i) from e
        scenarios.append(Scenario(weight=weights[i], clock=clock, boundary=b))
    return ScenarioSet(scenarios=scenarios)


def variance_solution_random(
    pdfs: Sequence[SurvivalPdf],
    boundaries: Sequence[Boundary],
    ctl: Optional[SeriesControl] = None,
    eta: Optional[float] = None,
) -> List[VarianceSolution]:
    if len(pdfs) != len(boundaries):
        raise ValueError("one boundary per scenario target is required")

    solutions = []
    for i, (f, b) in enumerate(zip(pdfs, boundaries)):
        try:
            if isinstance(b, OneSidedBoundary):
                y = variance_solution_one_sided(f, UNIT_BOUNDARY, eta)
                solution = VarianceSolution(
                    times=y.times, sigma2=tuple((b.g ** 2 * y.values).tolist())
                )
            else:
                solution = variance_solution_two_sided(f, b, ctl, eta)
        except FptError as e:
            raise _tag(e, i) from e
        solutions.append(solution)
    return solutions
