"""Entanglement monotones and doubly constrained EOF bounds for 4xN states."""

from .bounds import (
    BoundSurface,
    UnreachablePointError,
    bound_nphi,
    bound_nt,
    build_surface,
    eof_pure,
    eval_bound,
    h_tilde_2c,
    h_up,
    load_or_build,
    min_entropy_nt,
)
from .estimators import FormationBound, MonotoneFeatures
from .linalg import (
    DensityMatrix,
    apply_map_to_a,
    density_matrix,
    hermitian_eigenvalues,
    partial_transpose_a,
    realign,
    schmidt_vector,
    singular_values,
    trace_norm,
)
from .monotones import (
    MonotonePair,
    breuer_v,
    monotone_pair,
    negativity,
    negativity_pure,
    phi_map,
    phi_negativity,
    phi_negativity_pure,
    realignment_negativity,
)
from .oracle import (
    InfeasibleError,
    SimplexGrid,
    brute_min_entropy,
    negativity_constraint,
    phi_negativity_constraint,
    pure_scatter,
)
from .region import (
    RegionClass,
    classify,
    coverage_map,
    lower_pure_boundary,
    monotone_boundary,
    solve_schmidt,
    upper_pure_boundary,
)
from .validation import InternalInconsistencyError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "BoundSurface",
    "DensityMatrix",
    "FormationBound",
    "InfeasibleError",
    "InternalInconsistencyError",
    "MonotoneFeatures",
    "MonotonePair",
    "RegionClass",
    "SimplexGrid",
    "UnreachablePointError",
    "ValidationError",
    "apply_map_to_a",
    "bound_nphi",
    "bound_nt",
    "breuer_v",
    "brute_min_entropy",
    "build_surface",
    "classify",
    "coverage_map",
    "density_matrix",
    "eof_pure",
    "eval_bound",
    "h_tilde_2c",
    "h_up",
    "hermitian_eigenvalues",
    "load_or_build",
    "lower_pure_boundary",
    "min_entropy_nt",
    "monotone_boundary",
    "monotone_pair",
    "negativity",
    "negativity_constraint",
    "negativity_pure",
    "partial_transpose_a",
    "phi_map",
    "phi_negativity",
    "phi_negativity_constraint",
    "phi_negativity_pure",
    "pure_scatter",
    "realign",
    "realignment_negativity",
    "schmidt_vector",
    "singular_values",
    "solve_schmidt",
    "trace_norm",
    "upper_pure_boundary",
]
