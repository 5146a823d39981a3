# tests/test_inverse.py

import math

import numpy as np
import pytest
from scipy.integrate import cumulative_trapezoid

from fptclock.clock.crossing import crossing_cdf_one_sided, crossing_cdf_two_sided, mixture_cdf
from fptclock.errors import AssumptionError, SaturationError
from fptclock.inverse.solver import (
    inspect_target,
    local_integrability,
    qv_solution_one_sided,
    qv_solution_random,
    qv_solution_two_sided,
    support_thresholds,
    variance_solution_one_sided,
    variance_solution_random,
    variance_solution_two_sided,
)
from fptclock.types import OneSidedBoundary, SurvivalCdf, SurvivalPdf, TwoSidedBoundary
from fptclock.wiener.one_sided import levy_cdf, levy_pdf
from fptclock.wiener.two_sided import two_sided_cdf, two_sided_pdf

UNIT = OneSidedBoundary(g=1.0)
CORRIDOR = TwoSidedBoundary(g=1.0, h=-1.0)

LEVY_T = np.linspace(0.0, 10.0, 501)
EXP_T = np.linspace(0.0, 5.0, 501)


def levy_target() -> SurvivalCdf:
    return SurvivalCdf(times=LEVY_T, values=levy_cdf(UNIT, LEVY_T))


def exponential_target(t: np.ndarray = EXP_T) -> SurvivalCdf:
    return SurvivalCdf(times=t, values=-np.expm1(-t))

# ========== Targets ==========

def test_survival_cdf_validation():
    with pytest.raises(ValueError):
        SurvivalCdf(times=[0.0, 1.0], values=[0.1, 0.5])
    with pytest.raises(ValueError):
        SurvivalCdf(times=[0.0, 1.0, 2.0], values=[0.0, 0.5, 0.4])
    with pytest.raises(ValueError):
        SurvivalCdf(times=[0.0, 2.0, 1.0], values=[0.0, 0.1, 0.2])
    with pytest.raises(ValueError):
        SurvivalCdf(times=[0.0, 1.0], values=[0.0, 1.5])


def test_tiny_decreases_are_repaired_and_counted():
    F = SurvivalCdf(times=[0.0, 1.0, 2.0, 3.0], values=[0.0, 0.5, 0.5 - 1e-13, 0.7])
    assert F.repaired_knots == 1
    assert F.values[2] == 0.5


def test_survival_pdf_induced_cdf():
    f = SurvivalPdf(times=[0.0, 1.0, 2.0], densities=[0.2, 0.2, 0.2])
    np.testing.assert_allclose(f.cdf().F, [0.0, 0.2, 0.4])

# ========== Thresholds ==========

def test_thresholds_of_levy_target():
    th = support_thresholds(levy_target())
    assert th.k0 == 0.0
    assert th.k1 == math.inf
    assert not th.k1_finite


def test_thresholds_with_initial_zero_interval():
    F = SurvivalCdf(times=[0, 1, 2, 3, 4, 5], values=[0, 0, 0, 0.1, 0.3, 0.5])
    th = support_thresholds(F)
    assert th.k0 == 2.0
    assert th.k1 == math.inf


def test_thresholds_with_finite_k1():
    F = SurvivalCdf(times=[0, 1, 2, 3], values=[0, 0.4, 1.0, 1.0])
    assert support_thresholds(F).k1 == 2.0

# ========== Deterministic Clock ==========

def test_levy_target_recovers_identity_clock():
    clock = qv_solution_one_sided(levy_target(), UNIT)
    np.testing.assert_allclose(clock.values, LEVY_T, atol=1e-10)


def test_exponential_target_forward_round_trip():
    F = exponential_target()
    clock = qv_solution_one_sided(F, UNIT)
    np.testing.assert_allclose(crossing_cdf_one_sided(clock, UNIT, EXP_T), F.F, atol=1e-8)


def test_exponential_target_clock_at_median():
    t = np.array([0.0, math.log(2.0), 1.0, 2.0])
    clock = qv_solution_one_sided(exponential_target(t), UNIT)
    erfinv_half = 0.4769362762044699
    assert clock.value(math.log(2.0)) == pytest.approx(1.0 / (2.0 * erfinv_half ** 2), rel=1e-12)
    assert clock.value(math.log(2.0)) == pytest.approx(2.1981, abs=1e-4)


def test_clock_is_zero_before_k0():
    F = SurvivalCdf(times=[0, 1, 2, 3, 4, 5], values=[0, 0, 0, 0.1, 0.3, 0.5])
    clock = qv_solution_one_sided(F, UNIT)
    np.testing.assert_array_equal(clock.values[:3], [0.0, 0.0, 0.0])
    assert np.all(clock.values[3:] > 0)


def test_finite_k1_is_rejected():
    F = SurvivalCdf(times=[0, 1, 2, 3], values=[0, 0.4, 1.0, 1.0])
    with pytest.raises(AssumptionError):
        qv_solution_one_sided(F, UNIT)
    report = inspect_target(F)
    assert report.assumption_k1_infinite is False
    assert not report.accepted


def test_saturated_knot_is_rejected():
    F = SurvivalCdf(times=[0, 1, 2], values=[0, 0.5, 1.0 - 1e-15])
    with pytest.raises(SaturationError):
        qv_solution_one_sided(F, UNIT)
    assert inspect_target(F).saturated_knots == 1


def test_near_saturated_knot_is_reported_but_solved():
    F = SurvivalCdf(times=[0, 1, 2], values=[0, 0.5, 1.0 - 1e-12])
    report = inspect_target(F)
    assert report.clamped_knots == 1
    assert report.accepted
    clock = qv_solution_one_sided(F, UNIT)
    assert np.isfinite(clock.values[-1])


def test_two_sided_target_recovers_identity_clock():
    t = np.concatenate([[0.0], np.linspace(0.05, 5.0, 100)])
    F = SurvivalCdf(times=t, values=two_sided_cdf(CORRIDOR, t))
    clock = qv_solution_two_sided(F, CORRIDOR)
    np.testing.assert_allclose(clock.values, t, atol=1e-8)
    np.testing.assert_allclose(crossing_cdf_two_sided(clock, CORRIDOR, t), F.F, atol=1e-10)


def test_two_sided_target_on_a_long_grid():
    t = np.linspace(0.0, 20.0, 201)
    F = SurvivalCdf(times=t, values=two_sided_cdf(CORRIDOR, t))
    clock = qv_solution_two_sided(F, CORRIDOR)
    np.testing.assert_allclose(clock.values, t, rtol=1e-4, atol=1e-10)
    np.testing.assert_allclose(crossing_cdf_two_sided(clock, CORRIDOR, t), F.F, atol=1e-12)


def test_two_sided_exponential_target_to_fifteen():
    t = np.linspace(0.0, 15.0, 151)
    F = exponential_target(t)
    clock = qv_solution_two_sided(F, CORRIDOR)
    assert np.all(np.diff(clock.values) > 0)
    np.testing.assert_allclose(crossing_cdf_two_sided(clock, CORRIDOR, t), F.F, atol=1e-12)

# ========== Spot Variance ==========

def test_levy_pdf_target_gives_unit_variance():
    f = SurvivalPdf(times=LEVY_T, densities=levy_pdf(UNIT, LEVY_T), cdf_values=levy_cdf(UNIT, LEVY_T))
    solution = variance_solution_one_sided(f, UNIT)
    assert solution.values[0] == 0.0
    np.testing.assert_allclose(solution.values[1:], 1.0, atol=1e-8)


def test_integrated_variance_matches_clock():
    F = levy_target()
    f = SurvivalPdf(times=LEVY_T, densities=levy_pdf(UNIT, LEVY_T), cdf_values=F.F)
    sigma2 = variance_solution_one_sided(f, UNIT).values
    clock = qv_solution_one_sided(F, UNIT).values
    # sigma2(0) = 0 by the indicator, so integrate from the first positive knot
    integrated = cumulative_trapezoid(sigma2[1:], LEVY_T[1:], initial=0.0)
    np.testing.assert_allclose(integrated[1:], (clock[1:] - clock[1])[1:], rtol=1e-8)


def test_variance_is_zero_before_k0():
    t = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    shifted = np.clip(t - 1.0, 0.0, None)
    f = SurvivalPdf(times=t, densities=levy_pdf(UNIT, shifted), cdf_values=levy_cdf(UNIT, shifted))
    solution = variance_solution_one_sided(f, UNIT)
    np.testing.assert_array_equal(solution.values[:2], [0.0, 0.0])
    np.testing.assert_allclose(solution.values[2:], 1.0, atol=1e-8)


def test_two_sided_pdf_target_gives_unit_variance():
    t = np.concatenate([[0.0], np.linspace(0.05, 4.0, 80)])
    f = SurvivalPdf(times=t, densities=two_sided_pdf(CORRIDOR, t), cdf_values=two_sided_cdf(CORRIDOR, t))
    solution = variance_solution_two_sided(f, CORRIDOR)
    np.testing.assert_allclose(solution.values[1:], 1.0, atol=1e-8)


def test_steep_jump_fails_local_integrability():
    f = SurvivalPdf(
        times=[0.0, 0.01, 1.0, 2.0, 3.0],
        densities=[0.0, 90.0, 0.05, 0.02, 0.01],
        cdf_values=[0.0, 0.9, 0.95, 0.97, 0.98],
    )
    report = inspect_target(f.cdf(), UNIT, f)
    assert report.local_integrability_ok is False
    assert not report.accepted
    with pytest.raises(AssumptionError):
        variance_solution_one_sided(f, UNIT)


def test_levy_pdf_passes_local_integrability():
    f = SurvivalPdf(times=LEVY_T, densities=levy_pdf(UNIT, LEVY_T), cdf_values=levy_cdf(UNIT, LEVY_T))
    report = inspect_target(f.cdf(), UNIT, f)
    assert report.local_integrability_ok is True
    assert report.accepted
    assert inspect_target(f.cdf()).local_integrability_ok is None


def test_local_integrability_returns_builtin_bool():
    f = SurvivalPdf(times=LEVY_T, densities=levy_pdf(UNIT, LEVY_T), cdf_values=levy_cdf(UNIT, LEVY_T))
    assert type(local_integrability(f, UNIT)) is bool

# ========== Random Case ==========

def test_random_case_forward_maps_to_targets():
    t = np.linspace(0.0, 5.0, 201)
    targets = [exponential_target(t), SurvivalCdf(times=t, values=levy_cdf(UNIT, t))]
    boundaries = [OneSidedBoundary(g=2.0), UNIT]
    scenarios = qv_solution_random(targets, boundaries, weights=[0.4, 0.6])

    for scenario, F in zip(scenarios.scenarios, targets):
        np.testing.assert_allclose(crossing_cdf_one_sided(scenario.clock, scenario.boundary, t), F.F, atol=1e-8)
    expected = 0.4 * targets[0].F + 0.6 * targets[1].F
    np.testing.assert_allclose(mixture_cdf(scenarios, t), expected, atol=1e-8)


def test_random_case_scales_clock_by_level():
    t = np.linspace(0.0, 5.0, 51)
    F = exponential_target(t)
    unit = qv_solution_one_sided(F, UNIT)
    scenarios = qv_solution_random([F], [OneSidedBoundary(g=3.0)])
    np.testing.assert_allclose(scenarios.scenarios[0].clock.values, 9.0 * unit.values, rtol=1e-15)
    assert scenarios.scenarios[0].weight == 1.0


def test_random_case_default_weights_are_uniform():
    t = np.linspace(0.0, 5.0, 51)
    scenarios = qv_solution_random([exponential_target(t)] * 4, [UNIT] * 4)
    np.testing.assert_allclose(scenarios.weights, 0.25)


def test_random_case_tags_failing_scenario():
    good = exponential_target(np.linspace(0.0, 5.0, 51))
    bad = SurvivalCdf(times=[0, 1, 2, 3], values=[0, 0.4, 1.0, 1.0])
    with pytest.raises(AssumptionError) as err:
        qv_solution_random([good, bad], [UNIT, UNIT])
    assert err.value.scenario_index == 1
    assert "scenario 1" in str(err.value)


def test_random_case_variance_scales_by_level_squared():
    f = SurvivalPdf(times=LEVY_T, densities=levy_pdf(UNIT, LEVY_T), cdf_values=levy_cdf(UNIT, LEVY_T))
    solutions = variance_solution_random([f, f], [UNIT, OneSidedBoundary(g=2.0)])
    np.testing.assert_allclose(solutions[1].values, 4.0 * solutions[0].values, rtol=1e-15)
