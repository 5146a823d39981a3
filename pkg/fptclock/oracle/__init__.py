from fptclock.oracle.ks import ks_distance
from fptclock.oracle.simulate import (
    EmpiricalCdf,
    simulate_mixture,
    simulate_one_sided,
    simulate_two_sided,
)

__all__ = [
    "EmpiricalCdf",
    "simulate_one_sided",
    "simulate_two_sided",
    "simulate_mixture",
    "ks_distance",
]
