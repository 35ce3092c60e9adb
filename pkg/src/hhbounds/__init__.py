"""Numerical checks of Hermite-Hadamard type bounds for coordinatewise convex functions on boxes."""

from .bounds import (
    BoundsReport,
    JensenInstance,
    fejer_sandwich,
    hh_lower,
    hh_sandwich,
    hh_upper,
    jensen_bound,
)
from .box import (
    Box,
    corner,
    corner_weight,
    corners,
    interpolate,
    is_nfold_convex_set,
    midpoint,
    product_order_leq,
    volume,
)
from .convexity import (
    defining_inequality_gap,
    is_convex_fn,
    is_nfold_convex_fn,
    lemma_corner_majorization_gap,
)
from .errors import (
    BudgetExceededError,
    DimensionError,
    DomainError,
    EvaluationError,
    HHError,
    InconclusiveError,
    UnboundVariableError,
    WeightRejectedError,
)
from .expr import ExprSyntaxError, evaluate, max_var_index, parse, unparse
from .matrix import (
    MatrixInterval,
    flatten,
    matrix_hh_sandwich,
    matrix_interval_to_box,
    unflatten,
    vec_product_2x2,
)
from .quadrature import QuadratureResult, QuadratureRule, check_symmetry, gauss_legendre, integrate, integrate_weighted
from .verdict import ConvexityVerdict

__version__ = "0.1.0"
