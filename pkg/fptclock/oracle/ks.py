# fptclock/oracle/ks.py

from typing import Callable

import numpy as np

from fptclock.oracle.simulate import EmpiricalCdf


def ks_distance(emp: EmpiricalCdf, analytic: Callable[[np.ndarray], np.ndarray]) -> float:
    """
    sup |F_hat(t) - F(t)| over [0, horizon].

    The step cdf is checked on both sides of every jump. Censored paths carry no
    time, so the gap at the horizon, |len/n - F(horizon)|, is checked as well.
    `analytic` must accept an array.
    """
    n = emp.n_paths
    crossed = emp.evaluate(emp.horizon)
    tail = abs(crossed - float(np.asarray(analytic(np.asarray(emp.horizon)))))
    if len(emp) == 0:
        return tail

    model = np.asarray(analytic(emp.times), dtype=float)
    above = np.arange(1, len(emp) + 1) / n
    below = above - 1.0 / n
    jumps = max(np.max(np.abs(above - model)), np.max(np.abs(below - model)))
    return float(max(jumps, tail))
