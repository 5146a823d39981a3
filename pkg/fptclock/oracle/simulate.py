# fptclock/oracle/simulate.py
"""
Monte Carlo first-passage oracle for time-changed Brownian motion.

Paths are Brownian motion on the variation clock (equal variation steps, exactly
Gaussian increments). A crossing between two grid points is added with the
Brownian-bridge probability exp(-2 (g - x0)(g - x1) / dv); its variation level is
mapped back to calendar time through the clock's generalized inverse.

Paths are split into fixed blocks, each with its own child of SeedSequence(seed),
so results depend on (seed, block_size) only and not on the worker count.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from fptclock.clock.path import QuadraticVariationPath
from fptclock.constants import SimScheme
from fptclock.errors import DomainError
from fptclock.types import (
    Boundary,
    FloatOrArray,
    OneSidedBoundary,
    ScenarioSet,
    SimConfig,
    TwoSidedBoundary,
)

logger = logging.getLogger(__name__)

UPPER, LOWER = 1, -1

# ==================== Result ====================

@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """
    Sorted crossing times no later than `horizon`; paths without a crossing are
    censored. `sides[i]` is +1 for the upper barrier and -1 for the lower one.
    """
    times: np.ndarray
    sides: np.ndarray
    n_paths: int
    horizon: float
    censored_count: int = field(init=False)

    def __post_init__(self):
        if self.times.shape != self.sides.shape:
            raise ValueError("one side per crossing time is required")
        if self.times.size > self.n_paths:
            raise ValueError("more crossings than paths")
        if self.times.size and (np.any(np.diff(self.times) < 0) or self.times[-1] > self.horizon):
            raise ValueError("crossing times must be sorted and no later than the horizon")
        object.__setattr__(self, "censored_count", self.n_paths - int(self.times.size))
        self.times.setflags(write=False)
        self.sides.setflags(write=False)

    def __len__(self) -> int:
        return int(self.times.size)

    def evaluate(self, t: FloatOrArray) -> FloatOrArray:
        """Right-continuous step cdf: share of paths crossed by t."""
        out = np.searchsorted(self.times, t, side="right") / self.n_paths
        return float(out) if np.ndim(out) == 0 else out

    def standard_error(self, t: FloatOrArray) -> FloatOrArray:
        p = np.asarray(self.evaluate(t))
        out = np.sqrt(p * (1.0 - p) / self.n_paths)
        return float(out) if np.ndim(out) == 0 else out

    def side_counts(self) -> Tuple[int, int]:
        """(upper, lower) crossing counts."""
        return int(np.count_nonzero(self.sides == UPPER)), int(np.count_nonzero(self.sides == LOWER))

# ==================== Step Plans ====================

@dataclass(frozen=True)
class _StepPlan:
    """Per-step variance plus the map (step index, fraction) -> calendar time."""
    dv: np.ndarray
    to_time: Callable[[np.ndarray, np.ndarray], np.ndarray]
    upper: float
    lower: Optional[float]


def _barriers(b: Boundary) -> Tuple[float, Optional[float]]:
    if isinstance(b, TwoSidedBoundary):
        return b.g, b.h
    return b.g, None


def _plan(path: QuadraticVariationPath, b: Boundary, cfg: SimConfig) -> _StepPlan:
    if cfg.horizon > path.domain_end:
        raise DomainError(
            f"horizon {cfg.horizon} lies beyond the clock domain [0, {path.domain_end}]"
        )
    horizon = cfg.horizon
    upper, lower = _barriers(b)

    if cfg.scheme == SimScheme.TIME:
        n_steps = max(1, math.ceil(cfg.clock_steps * horizon))
        grid = np.linspace(0.0, horizon, n_steps + 1)
        dv = np.maximum(np.diff(np.asarray(path.value(grid))), 0.0)
        dt = horizon / n_steps

        def to_time(k: np.ndarray, frac: np.ndarray) -> np.ndarray:
            return np.minimum(grid[k] + frac * dt, horizon)

        return _StepPlan(dv, to_time, upper, lower)

    total = float(path.value(horizon))
    n_steps = max(1, math.ceil(cfg.clock_steps * total)) if total > 0 else 0
    step = total / n_steps if n_steps else 0.0
    dv = np.full(n_steps, step)

    def to_time(k: np.ndarray, frac: np.ndarray) -> np.ndarray:
        s = (k + frac) * step
        out = np.full(s.shape, horizon)
        below = s < total
        if np.any(below):
            out[below] = path.generalized_inverse(s[below])
        return np.minimum(out, horizon)

    return _StepPlan(dv, to_time, upper, lower)

# ==================== Path Kernel ====================

def _run_paths(
    rng: np.random.Generator, n: int, plan: _StepPlan, bridge: bool
) -> Tuple[np.ndarray, np.ndarray]:
    """Crossing times and sides of n fresh paths; censored paths are dropped."""
    g, h = plan.upper, plan.lower
    steps = np.full(n, -1, dtype=np.int64)
    frac = np.zeros(n)
    sides = np.zeros(n, dtype=np.int8)
    ids = np.arange(n)
    x = np.zeros(n)

    for k, dv in enumerate(plan.dv):
        if ids.size == 0:
            break
        if dv <= 0.0:
            continue
        x1 = x + math.sqrt(dv) * rng.standard_normal(ids.size)
        up = x1 >= g
        down = x1 <= h if h is not None else np.zeros(ids.size, dtype=bool)
        side = np.where(up, UPPER, np.where(down, LOWER, 0)).astype(np.int8)

        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            frac_at = np.where(up, (g - x) / (x1 - x), 0.5)
            if h is not None:
                frac_at = np.where(down, (x - h) / (x - x1), frac_at)
            if bridge:
                u = rng.random(ids.size)
                inside = side == 0
                p_up = np.exp(-2.0 * (g - x) * (g - x1) / dv)
                side = np.where(inside & (u < p_up), UPPER, side)
                if h is not None:
                    p_down = np.exp(-2.0 * (x - h) * (x1 - h) / dv)
                    p_any = p_up + p_down - p_up * p_down
                    side = np.where(inside & (u >= p_up) & (u < p_any), LOWER, side)
                side = side.astype(np.int8)

        hit = side != 0
        if np.any(hit):
            crossed = ids[hit]
            steps[crossed] = k
            frac[crossed] = np.clip(frac_at[hit], 0.0, 1.0)
            sides[crossed] = side[hit]
            keep = ~hit
            x, ids = x1[keep], ids[keep]
        else:
            x = x1

    crossed = steps >= 0
    return plan.to_time(steps[crossed], frac[crossed]), sides[crossed]

# ==================== Drivers ====================

def _blocks(cfg: SimConfig) -> List[Tuple[int, np.random.SeedSequence]]:
    n_blocks = math.ceil(cfg.n_paths / cfg.block_size)
    seeds = np.random.SeedSequence(cfg.seed).spawn(n_blocks)
    sizes = [min(cfg.block_size, cfg.n_paths - i * cfg.block_size) for i in range(n_blocks)]
    return list(zip(sizes, seeds))


def _collect(
    cfg: SimConfig,
    run_block: Callable[[int, np.random.SeedSequence], Tuple[np.ndarray, np.ndarray]],
) -> EmpiricalCdf:
    blocks = _blocks(cfg)
    logger.info(
        f"simulating {cfg.n_paths} paths in {len(blocks)} block(s) on {cfg.workers} worker(s), "
        f"scheme={cfg.scheme.value}, bridge={cfg.bridge_correction}"
    )
    if cfg.workers == 1:
        results = [run_block(n, seq) for n, seq in blocks]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda block: run_block(*block), blocks))

    times = np.concatenate([r[0] for r in results]) if results else np.empty(0)
    sides = np.concatenate([r[1] for r in results]) if results else np.empty(0, dtype=np.int8)
    order = np.argsort(times, kind="stable")
    emp = EmpiricalCdf(
        times=times[order], sides=sides[order].astype(np.int8), n_paths=cfg.n_paths, horizon=cfg.horizon
    )
    logger.info(f"{len(emp)} crossing(s), {emp.censored_count} censored at t={cfg.horizon:g}")
    return emp


def _simulate(path: QuadraticVariationPath, b: Boundary, cfg: SimConfig) -> EmpiricalCdf:
    plan = _plan(path, b, cfg)

    def run_block(n: int, seq: np.random.SeedSequence):
        return _run_paths(np.random.default_rng(seq), n, plan, cfg.bridge_correction)

    return _collect(cfg, run_block)


def simulate_one_sided(
    path: QuadraticVariationPath, b: OneSidedBoundary, cfg: SimConfig
) -> EmpiricalCdf:
    return _simulate(path, b, cfg)


def simulate_two_sided(
    path: QuadraticVariationPath, b: TwoSidedBoundary, cfg: SimConfig
) -> EmpiricalCdf:
    """Each barrier gets its own bridge probability, combined as p_g + p_h - p_g p_h."""
    return _simulate(path, b, cfg)


def simulate_mixture(scenarios: ScenarioSet, cfg: SimConfig) -> EmpiricalCdf:
    """
    Each path draws a scenario by weight, then runs under that scenario's clock and
    boundary. Scenarios of weight 0 never run; with a single live scenario no draw is
    made, so the result equals simulating that scenario directly.
    """
    plans = []
    for i, s in enumerate(scenarios.scenarios):
        try:
            plans.append(_plan(s.clock, s.boundary, cfg))
        except DomainError as e:
            raise DomainError(e.message, scenario_index=i) from e

    weights = scenarios.weights
    live = np.flatnonzero(weights > 0)
    probs = weights[live] / weights[live].sum()

    def run_block(n: int, seq: np.random.SeedSequence):
        rng = np.random.default_rng(seq)
        if live.size == 1:
            return _run_paths(rng, n, plans[live[0]], cfg.bridge_correction)
        picks = rng.choice(live.size, size=n, p=probs)
        parts = [
            _run_paths(rng, int(np.count_nonzero(picks == j)), plans[live[j]], cfg.bridge_correction)
            for j in range(live.size)
        ]
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])

    return _collect(cfg, run_block)
