"""Faces of the 2x4 separable-state body and PPT entangled edge states.

Builds the ten-product-vector family attached to a pair of constraint
subspaces, verifies its simplex structure numerically, and extends line
segments through the face to locate and certify PPT entangled edge
states of rank five.
"""

from .linalg import DEFAULT_TOL, DimensionError, Subspace, Tolerance
from .bipartite import (
    BipartiteState,
    FacePosition,
    ProductVector,
    SeparableDecomposition,
    StateType,
    in_face,
    mix,
    partial_transpose,
    range_criterion_check,
    range_space,
    state_type,
)
from .construction import (
    ConstructionParams,
    ConstructionResult,
    CubicRoots,
    ParameterDomainError,
    VerificationReport,
    build_rho0,
    build_rho1,
    conjugate_subspace,
    construct,
    enumerate_solutions,
    solve_modulus_cubics,
    tensor_subspace,
    verify_construction,
)
from .solver import (
    NonFiniteSolutionSetError,
    PairEquationProblem,
    PairSolutionSet,
    SearchOptions,
    membership_residual,
    solve_pair_equation,
)
from .path import (
    BindingSide,
    BoundaryResult,
    EigenvalueCurves,
    PathProblem,
    certify_boundary_type_bound,
    eigenvalue_curves,
    find_boundary_nu,
    rho_at,
)

__version__ = "0.1.0"

__all__ = [
    "BindingSide",
    "BipartiteState",
    "BoundaryResult",
    "ConstructionParams",
    "ConstructionResult",
    "CubicRoots",
    "DEFAULT_TOL",
    "DimensionError",
    "EigenvalueCurves",
    "FacePosition",
    "NonFiniteSolutionSetError",
    "PairEquationProblem",
    "PairSolutionSet",
    "ParameterDomainError",
    "PathProblem",
    "ProductVector",
    "SearchOptions",
    "SeparableDecomposition",
    "StateType",
    "Subspace",
    "Tolerance",
    "VerificationReport",
    "build_rho0",
    "build_rho1",
    "certify_boundary_type_bound",
    "conjugate_subspace",
    "construct",
    "eigenvalue_curves",
    "enumerate_solutions",
    "find_boundary_nu",
    "in_face",
    "membership_residual",
    "mix",
    "partial_transpose",
    "range_criterion_check",
    "range_space",
    "rho_at",
    "solve_modulus_cubics",
    "solve_pair_equation",
    "state_type",
    "tensor_subspace",
    "verify_construction",
]
