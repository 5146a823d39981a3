from fptclock.clock.path import (
    ClosedFormClock,
    GridClock,
    LinearClock,
    QuadraticVariationPath,
    ScaledClock,
    identity_clock,
    qv_derivative,
    qv_eval,
    qv_generalized_inverse,
)

__all__ = [
    "QuadraticVariationPath",
    "LinearClock",
    "ClosedFormClock",
    "GridClock",
    "ScaledClock",
    "identity_clock",
    "qv_eval",
    "qv_generalized_inverse",
    "qv_derivative",
]
