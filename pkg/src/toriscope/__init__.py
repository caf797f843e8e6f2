"""Exact-arithmetic toolkit for hunting pathological smooth and very ample
lattice polytopes: random projective fans, support polytopes, normality and
degree-2 generation tests, and the chiseling/shrinking reductions."""

from .errors import (
    DegenerateInputError,
    LimitsExceededError,
    NonPointedConeError,
    NonSimpleError,
    ParseError,
    SplitHypothesesError,
    ToriscopeError,
)
from .polytopes import (
    EhrhartData,
    LatticePolytope,
    PredicateResult,
    corner_cone,
    dilate,
    ehrhart,
    hc_condition,
    is_normal,
    is_smooth,
    is_very_ample,
    lattice_points,
    normal_fan,
    parse_polytope,
    format_polytope,
)
from .cones import (
    RationalCone,
    SimplicialCone,
    cone_from_generators,
    dplus1_hilbert_criterion,
    hilbert_basis,
    multiplicity,
    stellar_subdivide,
    support_hyperplanes,
    triangulate,
)
from .fans import (
    Fan,
    cartier_lattice,
    desingularize,
    fan_equals,
    format_fan,
    parse_fan,
    random_complete_fan,
    support_polytopes,
)

__version__ = "0.1.0"
