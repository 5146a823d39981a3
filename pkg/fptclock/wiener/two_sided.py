# fptclock/wiener/two_sided.py
"""
Exit of standard Brownian motion from the corridor (h, g), h < 0 < g.

The density is a sum of signed Levy kernels (method of images):

    ss_t(v, w) = sum_k a_k / sqrt(2 pi t^3) exp(-a_k^2 / 2t),  a_k = w - v + 2kw
    f_{g,h}(t) = ss_t(g, g - h) + ss_t(-h, g - h)

Integrating one kernel term over [0, t] gives 2 sign(a) Phi(-|a| / sqrt(t)).
Summing these signed integrals yields the cdf. Summing the unsigned
"4 - 2 Phi(.) - 2 Phi(.)" form instead does not converge as k -> -inf.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import special
from scipy.optimize import brentq

from fptclock.constants import ROOT_MAX_ITER, ROOT_RTOL, SATURATION_EPS, Z_STAR
from fptclock.errors import ConvergenceError, DomainError, SaturationError
from fptclock.specfun.erf import std_normal_isf
from fptclock.types import FloatOrArray, SeriesControl, TwoSidedBoundary
from fptclock.wiener.one_sided import levy_cdf_inverse

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)

DEFAULT_SERIES = SeriesControl()

BRACKET_SAFETY = 1.5
BRACKET_GROWTH_STEPS = 64
WIDE_WINDOW_TERMS = 10_000


def _finish(values: np.ndarray, scalar: bool) -> FloatOrArray:
    return float(values) if scalar else values


def _window_z(ctl: SeriesControl) -> float:
    # 2 Phi(-z) <= term_tol bounds every dropped integral term
    z_tol = std_normal_isf(min(ctl.term_tol / 2.0, 0.25))
    return max(Z_STAR, z_tol)


def _image_offsets(t_max: float, v: float, w: float, ctl: SeriesControl) -> np.ndarray:
    """a_k = w - v + 2kw for every k with |a_k| <= z sqrt(t_max) + w."""
    if not 0 < v < w:
        raise DomainError(f"series needs 0 < v < w, got v={v}, w={w}")
    reach = _window_z(ctl) * math.sqrt(t_max) + w
    base = w - v
    k_min = math.ceil((-reach - base) / (2.0 * w))
    k_max = math.floor((reach - base) / (2.0 * w))
    n_terms = k_max - k_min + 1
    if n_terms > ctl.max_terms:
        raise ConvergenceError(
            f"series window needs {n_terms} terms at t={t_max:g} "
            f"(max_terms={ctl.max_terms}); the term count grows like sqrt(t)/w"
        )
    if n_terms > WIDE_WINDOW_TERMS:
        logger.warning(f"wide series window: {n_terms} terms at t={t_max:g} (w={w:g})")
    logger.debug(f"series window k in [{k_min}, {k_max}] ({n_terms} terms) for t<={t_max:g}")
    return base + 2.0 * w * np.arange(k_min, k_max + 1, dtype=float)


def _positive_times(t: FloatOrArray) -> Tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr >= 0)) or np.any(np.isinf(arr)):
        raise DomainError("two-sided passage distribution needs finite t >= 0")
    return arr, arr > 0

# ========== Series ==========

def ss_density(
    t: FloatOrArray, v: float, w: float, ctl: Optional[SeriesControl] = None
) -> FloatOrArray:
    """ss_t(v, w), truncated to the window where dropped terms are below term_tol."""
    ctl = ctl or DEFAULT_SERIES
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)) or np.any(np.isinf(arr)):
        raise DomainError("ss_density needs finite t > 0")
    a = _image_offsets(float(np.max(arr)), v, w, ctl)
    tt = arr[..., None]
    terms = a / (SQRT_2PI * tt ** 1.5) * np.exp(-a * a / (2.0 * tt))
    return _finish(terms.sum(axis=-1), arr.ndim == 0)


def _ss_integral(t: np.ndarray, v: float, w: float, ctl: SeriesControl) -> np.ndarray:
    """int_0^t ss_x(v, w) dx as the sum of 2 sign(a) Phi(-|a| / sqrt(t))."""
    a = _image_offsets(float(np.max(t)), v, w, ctl)
    z = np.abs(a) / np.sqrt(t[..., None])
    return (2.0 * np.sign(a) * special.ndtr(-z)).sum(axis=-1)

# ========== Distribution ==========

def two_sided_pdf(
    b: TwoSidedBoundary, t: FloatOrArray, ctl: Optional[SeriesControl] = None
) -> FloatOrArray:
    """f_{g,h}^W(t) = ss_t(g, g - h) + ss_t(-h, g - h); 0 at t = 0."""
    ctl = ctl or DEFAULT_SERIES
    arr, positive = _positive_times(t)
    out = np.zeros(arr.shape)
    if np.any(positive):
        tp = arr[positive]
        out[positive] = ss_density(tp, b.g, b.width, ctl) + ss_density(tp, -b.h, b.width, ctl)
    return _finish(out, arr.ndim == 0)


def two_sided_series_split(
    b: TwoSidedBoundary, t: FloatOrArray, ctl: Optional[SeriesControl] = None
) -> Tuple[FloatOrArray, FloatOrArray]:
    """The two signed-integral series of the cdf, before summation and clamping."""
    ctl = ctl or DEFAULT_SERIES
    arr, positive = _positive_times(t)
    first = np.zeros(arr.shape)
    second = np.zeros(arr.shape)
    if np.any(positive):
        tp = arr[positive]
        first[positive] = _ss_integral(tp, b.g, b.width, ctl)
        second[positive] = _ss_integral(tp, -b.h, b.width, ctl)
    scalar = arr.ndim == 0
    return _finish(first, scalar), _finish(second, scalar)


def two_sided_cdf(
    b: TwoSidedBoundary, t: FloatOrArray, ctl: Optional[SeriesControl] = None
) -> FloatOrArray:
    """P_{g,h}^W(t), clamped to [0, 1]; 0 at t = 0."""
    first, second = two_sided_series_split(b, t, ctl)
    out = np.clip(np.asarray(first) + np.asarray(second), 0.0, 1.0)
    return _finish(out, np.ndim(t) == 0)

# ========== Inverse ==========

def two_sided_cdf_inverse(
    b: TwoSidedBoundary, p: FloatOrArray, ctl: Optional[SeriesControl] = None
) -> FloatOrArray:
    """
    The t with two_sided_cdf(t) = p, by Brent's method on a guaranteed bracket.

    With m = min(g, |h|): P_m(t) <= P_{g,h}(t) <= 2 P_m(t), so
    [levy_cdf_inverse(m, p/2), levy_cdf_inverse(m, p)] contains the root. The upper
    end is pulled in to where the slowest corridor mode has decayed to 1 - p,
    then doubled back out if that undershoots.
    """
    ctl = ctl or DEFAULT_SERIES
    arr = np.asarray(p, dtype=float)
    if np.any(~(arr >= 0)) or np.any(arr >= 1.0):
        raise DomainError("inverse is defined for probabilities in [0, 1)")
    if np.any(arr > 1.0 - SATURATION_EPS):
        raise SaturationError(
            f"probability within {SATURATION_EPS:g} of 1; the passage time overflows"
        )
    flat = np.atleast_1d(arr).ravel()
    out = np.array([_invert_one(b, float(level), ctl) for level in flat])
    return _finish(out.reshape(arr.shape), arr.ndim == 0)


def _survival_decay_time(b: TwoSidedBoundary, p: float) -> float:
    """
    Time by which the slowest corridor mode, (4/pi) exp(-pi^2 t / 2w^2),
    has decayed to 1 - p.
    """
    w = b.width
    return 2.0 * w * w / (math.pi ** 2) * math.log(4.0 / (math.pi * (1.0 - p)))


def _invert_one(b: TwoSidedBoundary, p: float, ctl: SeriesControl) -> float:
    if p == 0.0:
        return 0.0
    m = min(b.g, -b.h)
    t_lo = levy_cdf_inverse(m, p / 2.0)
    # the Levy bound has a polynomial tail; the corridor survival decays exponentially
    t_cap = levy_cdf_inverse(m, p)
    t_hi = min(t_cap, max(BRACKET_SAFETY * _survival_decay_time(b, p), t_lo))

    def gap(x: float) -> float:
        return two_sided_cdf(b, x, ctl) - p

    # rounding in the series can nudge an endpoint across p
    for _ in range(BRACKET_GROWTH_STEPS):
        lo_gap, hi_gap = gap(t_lo), gap(t_hi)
        if lo_gap <= 0.0 <= hi_gap:
            break
        if lo_gap > 0.0:
            t_lo *= 0.5
        if hi_gap < 0.0:
            t_lo = max(t_lo, t_hi)
            t_hi = min(2.0 * t_hi, t_cap) if t_hi < t_cap else 2.0 * t_hi
    else:
        raise ConvergenceError(f"could not bracket the two-sided inverse at p={p!r}")

    if lo_gap == 0.0:
        return t_lo
    if hi_gap == 0.0:
        return t_hi
    try:
        root, result = brentq(
            gap, t_lo, t_hi, xtol=1e-300, rtol=ROOT_RTOL, maxiter=ROOT_MAX_ITER, full_output=True
        )
    except (RuntimeError, ValueError) as e:
        raise ConvergenceError(f"root finding failed at p={p!r}: {e}") from e
    logger.debug(f"two-sided inverse p={p:.6g} -> t={root:.12g} in {result.iterations} iterations")
    return root
