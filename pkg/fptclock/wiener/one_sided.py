# fptclock/wiener/one_sided.py
"""
First passage of standard Brownian motion to a constant level g > 0.

The passage time has the Levy law: P(T <= t) = 2 Phi(-g / sqrt(t)).
t = 0 and p = 0 are exact special cases, not limits.
"""

import math
from typing import Union

import numpy as np
from scipy import special

from fptclock.constants import SATURATION_EPS
from fptclock.errors import DomainError, SaturationError
from fptclock.specfun.erf import erfcinv
from fptclock.types import FloatOrArray, OneSidedBoundary

SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT_PI = math.sqrt(math.pi)

LevelLike = Union[OneSidedBoundary, float]


def _level(b: LevelLike) -> float:
    if isinstance(b, OneSidedBoundary):
        return b.g
    return OneSidedBoundary(g=b).g


def _finish(values: np.ndarray, scalar: bool) -> FloatOrArray:
    return float(values) if scalar else values


def _times(t: FloatOrArray) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr >= 0)):
        raise DomainError("passage-time distribution needs t >= 0")
    return arr


def _probabilities(p: FloatOrArray) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if np.any(~(arr >= 0)) or np.any(arr >= 1.0):
        raise DomainError("inverse is defined for probabilities in [0, 1)")
    if np.any(arr > 1.0 - SATURATION_EPS):
        raise SaturationError(
            f"probability within {SATURATION_EPS:g} of 1; the passage time overflows"
        )
    return arr

# ========== Distribution ==========

def levy_cdf(b: LevelLike, t: FloatOrArray) -> FloatOrArray:
    """P_g^W(t) = 1 - Phi(g/sqrt(t)) + Phi(-g/sqrt(t)), and 0 at t = 0."""
    g = _level(b)
    arr = _times(t)
    positive = arr > 0
    with np.errstate(divide="ignore"):
        z = g / np.sqrt(np.where(positive, arr, 1.0))
    out = np.where(positive, 2.0 * special.ndtr(-z), 0.0)
    return _finish(out, arr.ndim == 0)


def levy_pdf(b: LevelLike, t: FloatOrArray) -> FloatOrArray:
    """f_g^W(t) = g / sqrt(2 pi t^3) exp(-g^2 / 2t), and 0 at t = 0."""
    g = _level(b)
    arr = _times(t)
    positive = arr > 0
    safe = np.where(positive, arr, 1.0)
    out = np.where(positive, g / (SQRT_2PI * safe ** 1.5) * np.exp(-g * g / (2.0 * safe)), 0.0)
    return _finish(out, arr.ndim == 0)

# ========== Inverse ==========

def levy_cdf_inverse(b: LevelLike, p: FloatOrArray) -> FloatOrArray:
    """(P_g^W)^{-1}(p) = g^2 / (2 erfinv(1 - p)^2), and 0 at p = 0."""
    g = _level(b)
    arr = _probabilities(p)
    positive = arr > 0
    y = erfcinv(np.where(positive, arr, 0.5))
    out = np.where(positive, g * g / (2.0 * y * y), 0.0)
    return _finish(out, arr.ndim == 0)


def levy_pdf_at_inverse(b: LevelLike, p: FloatOrArray) -> FloatOrArray:
    """f_g^W((P_g^W)^{-1}(p)) in closed form: 2/(g^2 sqrt(pi)) y^3 exp(-y^2), y = erfinv(1 - p)."""
    g = _level(b)
    arr = _probabilities(p)
    positive = arr > 0
    y = erfcinv(np.where(positive, arr, 0.5))
    out = np.where(positive, 2.0 / (g * g * SQRT_PI) * y ** 3 * np.exp(-y * y), 0.0)
    return _finish(out, arr.ndim == 0)
