# fptclock/constants.py

from enum import Enum, IntEnum

# ==================== Enumerations ====================

class BoundaryKind(str, Enum):
    ONE_SIDED = "one_sided"
    TWO_SIDED = "two_sided"

    @classmethod
    def list(cls):
        return [kind.value for kind in cls]


class SimScheme(str, Enum):
    # Equal steps of accumulated variation (Brownian motion on the variation clock)
    VARIATION = "variation"
    # Equal steps of calendar time (drift-free Ito process)
    TIME = "time"


class ExitCode(IntEnum):
    OK = 0
    VALIDATION = 2
    ASSUMPTION = 3
    NUMERICAL = 4

# ==================== Special Functions ====================

# |p| above this goes through erfcinv on the tail mass
ERFINV_TAIL_SWITCH = 0.9
ERFINV_NEWTON_STEPS = 2

# ==================== Probabilities ====================

# p > 1 - SATURATION_EPS cannot be inverted without overflow
SATURATION_EPS = 1e-14
# knots this close to 1 are reported, not rejected
NEAR_SATURATION_EPS = 1e-10
MONOTONE_REPAIR_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-12

# ==================== Series & Root Finding ====================

# 2 * Phi(-8.3) < 1e-16
Z_STAR = 8.3
ROOT_RTOL = 1e-12
ROOT_MAX_ITER = 200

# ==================== Inverse Problem ====================

INTEGRABILITY_RTOL = 0.25

# ==================== File Layouts ====================

GRID_LAYOUTS = {
    "grid": [("t",)],
    "clock": [("t", "v"), ("t", "v", "sigma2"), ("t", "value")],
    "target": [("t", "cdf"), ("t", "cdf", "pdf"), ("t", "value")],
    "pdf_target": [("t", "pdf"), ("t", "cdf", "pdf"), ("t", "value")],
    "simulation": [("t", "empirical_cdf"), ("t", "empirical_cdf", "analytic_cdf")],
    "crossings": [("time", "side")],
}

# ==================== Exports ====================

__all__ = [
    "BoundaryKind",
    "SimScheme",
    "ExitCode",
    "ERFINV_TAIL_SWITCH",
    "ERFINV_NEWTON_STEPS",
    "SATURATION_EPS",
    "NEAR_SATURATION_EPS",
    "MONOTONE_REPAIR_TOL",
    "WEIGHT_SUM_TOL",
    "Z_STAR",
    "ROOT_RTOL",
    "ROOT_MAX_ITER",
    "INTEGRABILITY_RTOL",
    "GRID_LAYOUTS",
]
