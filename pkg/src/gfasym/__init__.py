"""Coefficient asymptotics for rational multivariate generating functions
near smooth minimal poles, validated against exact and quadrature oracles."""

from .asymptotics import (
    AsymptoticExpansion,
    CombinedExpansion,
    LocalData,
    amplitude_series,
    bstar_coefficients,
    build_local_data,
    combine_finitely_minimal,
    evaluate_expansion,
    expand_2d,
    expand_at_sibling,
    export_expansion,
    gamma_constants,
    implicit_g_quadratic,
    implicit_g_series,
    leading_higher_d,
    leading_simple_2d,
    phase_series,
    q_polynomial,
)
from .critical import (
    CriticalPoint,
    Direction,
    check_simple_pole,
    classify_and_attach,
    classify_minimality,
    critical_system,
    dir_of,
    solve_critical_2d,
    solve_critical_nd,
)
from .errors import (
    BranchTrackingError,
    GFAsymError,
    NoConvergentStartError,
    NonConvergenceError,
    OutOfScopeError,
    PolyParseError,
    ValidationError,
)
from .gffile import dump_gf, dumps_gf, load_gf, loads_gf
from .oracle import CoefficientLattice, coefficient_at, extract_coefficients, extract_ray
from .poly import MultiPoly, RationalGF, gf_new, poly_eval, poly_parse, poly_partial
from .precision import DEFAULT_PRECISION, ComplexAP
from .quadrature import QuadratureSpec, model_integral, xi_quadrature
from .scalars import GaussianRational
from .series import (
    FormalSeries,
    ps_compose,
    ps_exp,
    ps_kth_root,
    ps_log1p,
    ps_revert,
)

__version__ = "0.1.0"
