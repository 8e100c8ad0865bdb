"""Expected revenue of Empirical Revenue Maximization from a few samples
of a regular distribution, and worst-case lower bounds for two samples."""

from .curve import (
    OptPoint,
    RevenueCurve,
    bumped_triangular,
    make_curve,
    normalize,
    opt,
    price_at,
    quadrilateral,
    read_curve,
    sample_values,
    scale,
    triangular,
    truncated_equal_revenue,
    value_at,
    write_curve,
)
from .engine import (
    ErmEstimate,
    Region,
    e2,
    erm1_exact,
    erm2_exact,
    erm2_region_exact,
    erm_mc,
    erm_price,
    threshold_lower,
    threshold_upper,
)

__version__ = "0.1.0"
