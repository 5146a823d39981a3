from fptclock.wiener.one_sided import levy_cdf, levy_cdf_inverse, levy_pdf, levy_pdf_at_inverse
from fptclock.wiener.two_sided import (
    ss_density,
    two_sided_cdf,
    two_sided_cdf_inverse,
    two_sided_pdf,
    two_sided_series_split,
)

__all__ = [
    "levy_cdf",
    "levy_pdf",
    "levy_cdf_inverse",
    "levy_pdf_at_inverse",
    "ss_density",
    "two_sided_pdf",
    "two_sided_cdf",
    "two_sided_cdf_inverse",
    "two_sided_series_split",
]
