# fptclock/clock/path.py
"""
Quadratic-variation clocks t -> <Z>_t.

Every clock is nondecreasing, starts at 0 and is defined on [0, domain_end].
A continuous local martingale Z runs as Brownian motion on this clock,
Z_t = B_{<Z>_t}, so boundary-crossing questions about Z are answered by
evaluating the Wiener formulas at v(t).
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from fptclock.constants import ROOT_RTOL
from fptclock.errors import DomainError

logger = logging.getLogger(__name__)

FloatOrArray = Union[float, np.ndarray]

# enough halvings to walk a double down to 0
BISECTION_MAX_ITER = 1100


def _finish(values: np.ndarray, scalar: bool) -> FloatOrArray:
    return float(values) if scalar else values


class QuadraticVariationPath(ABC):
    """Nondecreasing clock with v(0) = 0."""

    @property
    @abstractmethod
    def domain_end(self) -> float:
        ...

    @abstractmethod
    def _value(self, t: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _derivative(self, t: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _generalized_inverse(self, s: np.ndarray) -> np.ndarray:
        ...

    @property
    def terminal_variation(self) -> float:
        """v(domain_end); +inf for unbounded clocks."""
        if math.isinf(self.domain_end):
            return math.inf
        return float(self._value(np.array(self.domain_end)))

    def _check_time(self, t: FloatOrArray) -> np.ndarray:
        arr = np.asarray(t, dtype=float)
        if np.any(~(arr >= 0)) or np.any(arr > self.domain_end):
            raise DomainError(f"time outside the clock domain [0, {self.domain_end}]")
        return arr

    def value(self, t: FloatOrArray) -> FloatOrArray:
        arr = self._check_time(t)
        return _finish(self._value(arr), arr.ndim == 0)

    def derivative(self, t: FloatOrArray) -> FloatOrArray:
        arr = self._check_time(t)
        return _finish(self._derivative(arr), arr.ndim == 0)

    def generalized_inverse(self, s: FloatOrArray) -> FloatOrArray:
        """inf{ t >= 0 : v(t) > s }."""
        arr = np.asarray(s, dtype=float)
        if np.any(~(arr >= 0)):
            raise DomainError("variation level must be nonnegative")
        if np.any(arr >= self.terminal_variation):
            raise DomainError(
                f"variation level beyond the reachable variation {self.terminal_variation}"
            )
        return _finish(self._generalized_inverse(arr), arr.ndim == 0)

    def __call__(self, t: FloatOrArray) -> FloatOrArray:
        return self.value(t)


class LinearClock(QuadraticVariationPath):
    """v(t) = rate * t; rate = 1 is Brownian motion itself."""

    def __init__(self, rate: float = 1.0, domain_end: float = math.inf):
        if not rate > 0 or not math.isfinite(rate):
            raise DomainError(f"clock rate must be positive and finite, got {rate}")
        if not domain_end > 0:
            raise DomainError(f"domain_end must be positive, got {domain_end}")
        self.rate = float(rate)
        self._domain_end = float(domain_end)

    @property
    def domain_end(self) -> float:
        return self._domain_end

    def _value(self, t: np.ndarray) -> np.ndarray:
        return self.rate * t

    def _derivative(self, t: np.ndarray) -> np.ndarray:
        return np.full_like(t, self.rate)

    def _generalized_inverse(self, s: np.ndarray) -> np.ndarray:
        return s / self.rate

    def __repr__(self) -> str:
        return f"LinearClock(rate={self.rate}, domain_end={self.domain_end})"


def identity_clock(domain_end: float = math.inf) -> LinearClock:
    return LinearClock(1.0, domain_end)


class ClosedFormClock(QuadraticVariationPath):
    """
    Clock given by callables. `value_fn` must be nondecreasing with value_fn(0) = 0;
    the generalized inverse is found numerically when `inverse_fn` is not given.
    """

    def __init__(
        self,
        value_fn: Callable[[np.ndarray], np.ndarray],
        derivative_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        domain_end: float = math.inf,
        inverse_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ):
        if not domain_end > 0:
            raise DomainError(f"domain_end must be positive, got {domain_end}")
        start = float(value_fn(np.array(0.0)))
        if start != 0.0:
            raise DomainError(f"clock must start at 0, got v(0)={start}")
        self.value_fn = value_fn
        self.derivative_fn = derivative_fn
        self.inverse_fn = inverse_fn
        self._domain_end = float(domain_end)

    @property
    def domain_end(self) -> float:
        return self._domain_end

    def _value(self, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.value_fn(t), dtype=float)

    def _derivative(self, t: np.ndarray) -> np.ndarray:
        if self.derivative_fn is None:
            raise DomainError("this clock has no derivative; it is not known to be absolutely continuous")
        return np.asarray(self.derivative_fn(t), dtype=float)

    def _generalized_inverse(self, s: np.ndarray) -> np.ndarray:
        if self.inverse_fn is not None:
            return np.asarray(self.inverse_fn(s), dtype=float)
        flat = np.atleast_1d(s)
        out = np.array([self._solve(level) for level in flat])
        return out.reshape(np.shape(s))

    def _above(self, x: float, level: float) -> bool:
        return float(self.value_fn(np.array(x))) > level

    def _solve(self, level: float) -> float:
        """Bisection on the predicate v(t) > level, so plateaus resolve to their right end."""
        hi = 1.0 if math.isinf(self.domain_end) else self.domain_end
        while math.isinf(self.domain_end) and not self._above(hi, level):
            hi *= 2.0
        lo = 0.0
        # v(lo) <= level < v(hi)
        for _ in range(BISECTION_MAX_ITER):
            if hi - lo <= ROOT_RTOL * hi:
                break
            mid = 0.5 * (lo + hi)
            if self._above(mid, level):
                hi = mid
            else:
                lo = mid
        return hi


class GridClock(QuadraticVariationPath):
    """Knots (t_i, v_i) joined linearly; t strictly increasing, v nondecreasing."""

    def __init__(self, times: np.ndarray, values: np.ndarray):
        times = np.array(times, dtype=float)
        values = np.array(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or times.size < 2:
            raise DomainError("a grid clock needs two or more (t, v) knots of equal length")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise DomainError("grid clock contains non-finite numbers")
        if times[0] != 0.0 or values[0] != 0.0:
            raise DomainError("grid clock must start at the knot (0, 0)")
        if np.any(np.diff(times) <= 0):
            raise DomainError("grid clock times must be strictly increasing")
        if np.any(np.diff(values) < 0):
            bad = int(np.argmax(np.diff(values) < 0)) + 1
            raise DomainError(f"grid clock decreases at knot {bad} (t={times[bad]})")
        self.times = times
        self.values = values
        self.slopes = np.diff(values) / np.diff(times)
        self.times.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def from_variance(cls, times: np.ndarray, sigma2: np.ndarray) -> "GridClock":
        """<Z>_t = int_0^t sigma^2_u du for the drift-free Ito process dZ = sigma dW."""
        sigma2 = np.asarray(sigma2, dtype=float)
        if np.any(sigma2 < 0):
            raise DomainError("spot variance must be nonnegative")
        values = cumulative_trapezoid(sigma2, np.asarray(times, dtype=float), initial=0.0)
        return cls(times, np.maximum.accumulate(values))

    @property
    def domain_end(self) -> float:
        return float(self.times[-1])

    def _value(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, self.times, self.values)

    def _derivative(self, t: np.ndarray) -> np.ndarray:
        # right-hand slope at knots; the last knot takes the last segment's slope
        idx = np.searchsorted(self.times, t, side="right") - 1
        idx = np.clip(idx, 0, self.slopes.size - 1)
        return self.slopes[idx]

    def _generalized_inverse(self, s: np.ndarray) -> np.ndarray:
        # first knot strictly above s closes the segment holding the infimum
        j = np.searchsorted(self.values, s, side="right")
        j = np.clip(j, 1, self.values.size - 1)
        v0, v1 = self.values[j - 1], self.values[j]
        t0, t1 = self.times[j - 1], self.times[j]
        return t0 + (s - v0) / (v1 - v0) * (t1 - t0)

    def __repr__(self) -> str:
        return f"GridClock(knots={self.times.size}, domain_end={self.domain_end})"


class ScaledClock(QuadraticVariationPath):
    """factor * base(t); the clock of c * Z is c^2 <Z>."""

    def __init__(self, base: QuadraticVariationPath, factor: float):
        if not factor > 0 or not math.isfinite(factor):
            raise DomainError(f"scale factor must be positive and finite, got {factor}")
        self.base = base
        self.factor = float(factor)

    @property
    def domain_end(self) -> float:
        return self.base.domain_end

    def _value(self, t: np.ndarray) -> np.ndarray:
        return self.factor * self.base._value(t)

    def _derivative(self, t: np.ndarray) -> np.ndarray:
        return self.factor * self.base._derivative(t)

    def _generalized_inverse(self, s: np.ndarray) -> np.ndarray:
        return self.base._generalized_inverse(s / self.factor)

    def __repr__(self) -> str:
        return f"ScaledClock({self.base!r}, factor={self.factor})"

# ========== Module-level Operations ==========

def qv_eval(path: QuadraticVariationPath, t: FloatOrArray) -> FloatOrArray:
    """v(t); exact at the knots of a grid clock."""
    return path.value(t)


def qv_generalized_inverse(path: QuadraticVariationPath, s: FloatOrArray) -> FloatOrArray:
    """Right-continuous generalized inverse; a plateau maps to its right end."""
    return path.generalized_inverse(s)


def qv_derivative(path: QuadraticVariationPath, t: FloatOrArray) -> FloatOrArray:
    """v'(t), the right-hand slope at grid knots."""
    return path.derivative(t)
