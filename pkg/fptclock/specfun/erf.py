# fptclock/specfun/erf.py
"""
Standard normal cdf, error function and their inverses.

Forward functions are scipy's. The inverses start from scipy's rational
approximations and take Newton steps against erf/erfc; the inverse-FPT
formulas square erfinv, so its relative error doubles downstream.
"""

import math
from typing import Union

import numpy as np
from scipy import special

from fptclock.constants import ERFINV_NEWTON_STEPS, ERFINV_TAIL_SWITCH
from fptclock.errors import DomainError

FloatOrArray = Union[float, np.ndarray]

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def _finish(values: np.ndarray, scalar: bool) -> FloatOrArray:
    return float(values) if scalar else values


def _finite(x: FloatOrArray, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)):
        raise DomainError(f"{name} received NaN")
    return arr

# ==================== Forward ====================

def std_normal_cdf(x: FloatOrArray) -> FloatOrArray:
    """Phi(x); saturates to 0/1 far in the tails."""
    arr = _finite(x, "std_normal_cdf")
    return _finish(special.ndtr(arr), arr.ndim == 0)


def erf(x: FloatOrArray) -> FloatOrArray:
    arr = _finite(x, "erf")
    return _finish(special.erf(arr), arr.ndim == 0)


def erfc(x: FloatOrArray) -> FloatOrArray:
    arr = _finite(x, "erfc")
    return _finish(special.erfc(arr), arr.ndim == 0)

# ==================== Inverses ====================

def erfinv(p: FloatOrArray) -> FloatOrArray:
    """
    Inverse of erf on (-1, 1).

    For |p| > ERFINV_TAIL_SWITCH the root is found from the tail mass 1 - |p|
    (exact there by Sterbenz) to keep the relative accuracy near +/-1.
    """
    arr = _finite(p, "erfinv")
    if np.any(np.abs(arr) >= 1.0):
        raise DomainError("erfinv is defined on the open interval (-1, 1)")

    mag = np.abs(arr)
    tail = mag > ERFINV_TAIL_SWITCH
    x = np.where(tail, special.erfcinv(np.where(tail, 1.0 - mag, 1.0)), special.erfinv(mag))

    for _ in range(ERFINV_NEWTON_STEPS):
        slope = TWO_OVER_SQRT_PI * np.exp(-x * x)
        safe = slope > 0
        denom = np.where(safe, slope, 1.0)
        step = np.where(
            tail,
            (special.erfc(x) - (1.0 - mag)) / denom,
            (mag - special.erf(x)) / denom,
        )
        x = np.where(safe, x + step, x)

    return _finish(np.copysign(x, arr), arr.ndim == 0)


def erfcinv(q: FloatOrArray) -> FloatOrArray:
    """Inverse of erfc on (0, 2); erfcinv(q) = erfinv(1 - q) without forming 1 - q."""
    arr = _finite(q, "erfcinv")
    if np.any(arr <= 0.0) or np.any(arr >= 2.0):
        raise DomainError("erfcinv is defined on the open interval (0, 2)")

    x = special.erfcinv(arr)
    for _ in range(ERFINV_NEWTON_STEPS):
        slope = TWO_OVER_SQRT_PI * np.exp(-x * x)
        safe = slope > 0
        x = np.where(safe, x + (special.erfc(x) - arr) / np.where(safe, slope, 1.0), x)

    return _finish(x, arr.ndim == 0)


def std_normal_isf(p: FloatOrArray) -> FloatOrArray:
    """z with 1 - Phi(z) = p."""
    arr = _finite(p, "std_normal_isf")
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("std_normal_isf is defined on the open interval (0, 1)")
    return _finish(-special.ndtri(arr), arr.ndim == 0)
