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

__all__ = [
    "support_thresholds",
    "inspect_target",
    "local_integrability",
    "qv_solution_one_sided",
    "qv_solution_two_sided",
    "variance_solution_one_sided",
    "variance_solution_two_sided",
    "qv_solution_random",
    "variance_solution_random",
]
