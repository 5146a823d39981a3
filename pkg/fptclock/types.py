# fptclock/types.py

import math
from typing import Any, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from fptclock import config
from fptclock.clock.path import GridClock, QuadraticVariationPath, ScaledClock
from fptclock.constants import MONOTONE_REPAIR_TOL, WEIGHT_SUM_TOL, BoundaryKind, SimScheme

# ==================== Aliases ====================

FloatOrArray = Union[float, np.ndarray]

# ==================== Boundaries ====================

class OneSidedBoundary(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    g: float = Field(gt=0, allow_inf_nan=False)

    @property
    def kind(self) -> BoundaryKind:
        return BoundaryKind.ONE_SIDED


class TwoSidedBoundary(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    g: float = Field(gt=0, allow_inf_nan=False)
    h: float = Field(lt=0, allow_inf_nan=False)

    @property
    def kind(self) -> BoundaryKind:
        return BoundaryKind.TWO_SIDED

    @property
    def width(self) -> float:
        return self.g - self.h


Boundary = Union[OneSidedBoundary, TwoSidedBoundary]

UNIT_BOUNDARY = OneSidedBoundary(g=1.0)

# ==================== Numerical Controls ====================

class SeriesControl(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    term_tol: float = Field(default=config.DEFAULT_TERM_TOL, gt=0)
    max_terms: int = Field(default=config.DEFAULT_MAX_TERMS, ge=1)


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_paths: int = Field(ge=1)
    horizon: float = Field(gt=0, allow_inf_nan=False)
    clock_steps: int = Field(default=config.DEFAULT_CLOCK_STEPS, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    bridge_correction: bool = True
    scheme: SimScheme = SimScheme.VARIATION
    workers: int = Field(default=config.DEFAULT_WORKERS, ge=1)
    block_size: int = Field(default=config.DEFAULT_BLOCK_SIZE, ge=1)

# ==================== Survival Targets ====================

class SurvivalCdf(BaseModel):
    """
    Target cdf of the inverse problem on a monotone piecewise-linear grid.

    The first knot must be (0, 0). Decreases of at most MONOTONE_REPAIR_TOL are
    repaired by a running maximum and counted in `repaired_knots`.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    times: Tuple[float, ...]
    values: Tuple[float, ...]
    repaired_knots: int = 0

    @model_validator(mode="before")
    @classmethod
    def _check_grid(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        times = np.asarray(data.get("times"), dtype=float)
        values = np.asarray(data.get("values"), dtype=float)
        _check_knots(times, values)
        if values[0] != 0.0:
            raise ValueError(f"F(0) must be 0, got {values[0]}")
        if np.any(values < -MONOTONE_REPAIR_TOL) or np.any(values > 1.0 + MONOTONE_REPAIR_TOL):
            raise ValueError("cdf values must lie in [0, 1]")
        values = np.clip(values, 0.0, 1.0)

        running = np.maximum.accumulate(values)
        drop = running - values
        if np.any(drop > MONOTONE_REPAIR_TOL):
            bad = int(np.argmax(drop > MONOTONE_REPAIR_TOL))
            raise ValueError(f"cdf decreases at knot {bad} (t={times[bad]}) by {drop[bad]:.3e}")
        repaired = int(np.count_nonzero(drop > 0))
        return {
            "times": tuple(times.tolist()),
            "values": tuple(running.tolist()),
            "repaired_knots": data.get("repaired_knots", 0) + repaired,
        }

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.times)

    @property
    def F(self) -> np.ndarray:
        return np.asarray(self.values)

    def __call__(self, t: FloatOrArray) -> FloatOrArray:
        out = np.interp(t, self.t, self.F)
        return float(out) if np.ndim(out) == 0 else out


class SurvivalPdf(BaseModel):
    """
    Target pdf on a grid. The companion cdf is the cumulative trapezoid of the
    densities unless `cdf_values` supplies it.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    times: Tuple[float, ...]
    densities: Tuple[float, ...]
    cdf_values: Optional[Tuple[float, ...]] = None

    @model_validator(mode="before")
    @classmethod
    def _check_grid(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        times = np.asarray(data.get("times"), dtype=float)
        densities = np.asarray(data.get("densities"), dtype=float)
        _check_knots(times, densities)
        if np.any(densities < 0):
            bad = int(np.argmax(densities < 0))
            raise ValueError(f"density is negative at knot {bad} (t={times[bad]})")
        out = {"times": tuple(times.tolist()), "densities": tuple(densities.tolist())}
        if data.get("cdf_values") is not None:
            cdf_values = np.asarray(data["cdf_values"], dtype=float)
            if cdf_values.shape != times.shape:
                raise ValueError("cdf_values must have one value per knot")
            out["cdf_values"] = tuple(cdf_values.tolist())
        return out

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.times)

    @property
    def f(self) -> np.ndarray:
        return np.asarray(self.densities)

    def cdf(self) -> SurvivalCdf:
        if self.cdf_values is not None:
            values = np.asarray(self.cdf_values)
        else:
            from scipy.integrate import cumulative_trapezoid

            values = cumulative_trapezoid(self.f, self.t, initial=0.0)
        return SurvivalCdf(times=self.times, values=np.minimum(values, 1.0))


def _check_knots(times: np.ndarray, values: np.ndarray) -> None:
    if times.ndim != 1 or values.shape != times.shape:
        raise ValueError("times and values must be 1-D arrays of equal length")
    if times.size < 2:
        raise ValueError("a grid needs at least two knots")
    if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
        raise ValueError("grid contains non-finite numbers")
    if times[0] != 0.0:
        raise ValueError(f"grid must start at t=0, got {times[0]}")
    if np.any(np.diff(times) <= 0):
        raise ValueError("grid times must be strictly increasing")

# ==================== Inverse Reports ====================

class SupportThresholds(BaseModel):
    model_config = ConfigDict(frozen=True)

    k0: float = Field(ge=0)
    k1: float

    @model_validator(mode="after")
    def _ordered(self) -> "SupportThresholds":
        if self.k0 > self.k1:
            raise ValueError(f"k0={self.k0} exceeds k1={self.k1}")
        return self

    @property
    def k1_finite(self) -> bool:
        return math.isfinite(self.k1)


class InverseReport(BaseModel):
    thresholds: SupportThresholds
    assumption_k1_infinite: bool
    local_integrability_ok: Optional[bool] = None
    clamped_knots: int = 0
    repaired_knots: int = 0
    saturated_knots: int = 0
    n_knots: int = 0
    scenario_index: Optional[int] = None

    @property
    def accepted(self) -> bool:
        return (
            self.assumption_k1_infinite
            and self.saturated_knots == 0
            and self.local_integrability_ok is not False
        )


class VarianceSolution(BaseModel):
    """Spot variance sigma^2 on the knots of the target pdf."""
    model_config = ConfigDict(frozen=True)

    times: Tuple[float, ...]
    sigma2: Tuple[float, ...]

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.times)

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.sigma2)

    def to_clock(self) -> GridClock:
        return GridClock.from_variance(self.t, self.values)

# ==================== Random Case ====================

class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weight: float = Field(ge=0, le=1)
    clock: QuadraticVariationPath
    boundary: Boundary

    @property
    def one_sided(self) -> bool:
        return self.boundary.kind is BoundaryKind.ONE_SIDED


class ScenarioSet(BaseModel):
    """
    Finite weighted sample of (clock, boundary) pairs standing in for the law of a
    random quadratic variation and random boundary levels. The clock of each scenario
    must be independent of its boundary; this is the caller's modelling choice.
    """
    model_config = ConfigDict(frozen=True)

    scenarios: List[Scenario] = Field(min_length=1)

    @field_validator("scenarios")
    @classmethod
    def _weights_sum_to_one(cls, scenarios: List[Scenario]) -> List[Scenario]:
        total = math.fsum(s.weight for s in scenarios)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"scenario weights sum to {total!r}, expected 1")
        return scenarios

    @property
    def weights(self) -> np.ndarray:
        return np.array([s.weight for s in self.scenarios])

    def __len__(self) -> int:
        return len(self.scenarios)

    def normalized(self) -> "ScenarioSet":
        """Rewrite one-sided scenarios as Y = Z/g against the unit boundary."""
        out = []
        for s in self.scenarios:
            if s.one_sided and s.boundary.g != 1.0:
                clock = ScaledClock(s.clock, 1.0 / s.boundary.g ** 2)
                out.append(Scenario(weight=s.weight, clock=clock, boundary=UNIT_BOUNDARY))
            else:
                out.append(s)
        return ScenarioSet(scenarios=out)

    def blend(self, other: "ScenarioSet", lam: float) -> "ScenarioSet":
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"blend weight must lie in [0, 1], got {lam}")
        mixed = [s.model_copy(update={"weight": lam * s.weight}) for s in self.scenarios]
        mixed += [s.model_copy(update={"weight": (1.0 - lam) * s.weight}) for s in other.scenarios]
        return ScenarioSet(scenarios=mixed)

# ==================== CLI Run Configuration ====================

class SeriesSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    term_tol: float = Field(default=config.DEFAULT_TERM_TOL, gt=0)
    max_terms: int = Field(default=config.DEFAULT_MAX_TERMS, ge=1)


class SimulationSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_paths: Optional[int] = Field(default=None, ge=1)
    clock_steps: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    bridge_correction: Optional[bool] = None
    horizon: Optional[float] = Field(default=None, gt=0)
    scheme: Optional[SimScheme] = None
    workers: Optional[int] = Field(default=None, ge=1)
    block_size: Optional[int] = Field(default=None, ge=1)


class ScenarioSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    weight: float = Field(ge=0, le=1)
    clock: Optional[str] = None
    boundary_upper: float = Field(gt=0)
    boundary_lower: Optional[float] = Field(default=None, lt=0)
    target: Optional[str] = None
    pdf_target: Optional[str] = None


class RunConfig(BaseModel):
    """JSON run configuration; command-line flags override its values."""
    model_config = ConfigDict(extra="forbid")

    command: Optional[Literal["forward", "inverse", "simulate"]] = None
    boundary_upper: Optional[float] = Field(default=None, gt=0)
    boundary_lower: Optional[float] = Field(default=None, lt=0)
    clock: Optional[str] = None
    grid: Optional[str] = None
    target: Optional[str] = None
    pdf_target: Optional[str] = None
    out: Optional[str] = None
    report: Optional[str] = None
    summary: Optional[str] = None
    crossings: Optional[str] = None
    compare: bool = False
    series: SeriesSettings = Field(default_factory=SeriesSettings)
    simulation: SimulationSettings = Field(default_factory=SimulationSettings)
    scenarios: Optional[List[ScenarioSpec]] = None
