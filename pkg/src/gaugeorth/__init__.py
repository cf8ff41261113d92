"""Orthogonality, approximation and bisector computations for gauges on R^d."""

from .approximation import (
    BestApproxResult,
    Subspace,
    annihilating_support,
    best_approx_membership,
    best_approximation,
    certificate_exists,
    coapprox_membership_sampled,
    coapprox_sufficient_test,
)
from .calculus import (
    SubdifferentialOracle,
    directional_derivative,
    gateaux_gradient,
    golden_section,
    slope_directional_derivative,
    subdifferential,
)
from .gauges import (
    DimensionError,
    Ellipsoid,
    Gauge,
    GaugeValidationError,
    PolytopeH,
    PolytopeV,
    dump_gauge,
    euclidean_gauge,
    gauge_from_dict,
    load_gauge,
    reverse,
    scale,
    triangle_gauge,
)
from .geometry import (
    Cone,
    Section2D,
    bisector_sample,
    boundary_reversal_check_2d,
    circle_directions,
    cone_membership,
    m_value,
    make_cone,
    max_parallel_segment,
    rotated_polar_gauge,
    rotundity_check,
    section2d,
    smoothness_check,
    unique_bisector_guarantee,
)
from .lp import LinearProgram, NumericalError, solve_linear_fractional, solve_lp
from .orthogonality import (
    AlphaInterval,
    Weight,
    birkhoff_dual_test,
    birkhoff_slack,
    birkhoff_test,
    duality_map,
    isosceles_alpha_interval,
    isosceles_function,
    isosceles_right_existence_search,
    isosceles_test,
    left_alpha_interval,
    line_minimum,
    right_alpha_interval,
    semi_inner_inferior,
    semi_inner_superior,
)

__version__ = "0.1.0"
