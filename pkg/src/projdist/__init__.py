"""Exact symbolic engine for horizontal plane distributions over surfaces.

Computes derived flags and growth vectors of the plane fields attached to
canonical rank-4 surface systems, curvature of the associated bundle
connections, and the projective invariants that classify the surface.
"""

__version__ = "0.1.0"

from .errors import (
    ConsistencyError,
    EvaluationError,
    ExprParseError,
    PreconditionError,
    ProjdistError,
)
from .expr import Expr, differentiate, eval_at, parse, to_text
from .forms import (
    Chart,
    Distribution,
    Form,
    GrowthVector,
    VectorField,
    annihilator,
    cauchy_characteristics,
    derived_codistribution,
    derived_flag,
    exterior_derivative,
    generic_rank,
    lie_bracket,
    wedge,
)
from .connection import (
    Christoffel,
    Connection,
    Curvature,
    classify_growth,
    covariant_curvature_derivatives,
    curvature,
    euclidean_connection,
    gauge_transform,
    horizontal_distribution,
    scale_and_boost_gauge,
)
from .projective import (
    CanonicalSystem,
    Classification,
    GeneralSystem,
    InvariantsReport,
    PreCanonicalSystem,
    SurfaceWorkspace,
    applicability_residuals,
    bar_connection,
    canonicalize,
    catalog,
    classify,
    concrete_canonical_system,
    derived_reduction,
    extract_h,
    gaussian_curvature,
    growth_dictionary,
    hat_distribution,
    integrability_residuals,
    invariants,
    m6_distribution,
    rank4_connection,
    ruled_canonical,
    ruled_ode_matrix,
    symbolic_canonical_system,
    wilczynski_covariance_check,
)
from .symbols import JetFunction, Symbol, SymbolTable
