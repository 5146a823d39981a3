from fptclock.specfun.erf import (
    erf,
    erfc,
    erfcinv,
    erfinv,
    std_normal_cdf,
    std_normal_isf,
)

__all__ = ["std_normal_cdf", "std_normal_isf", "erf", "erfc", "erfinv", "erfcinv"]
