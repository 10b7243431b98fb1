"""Boundary extension along the segment through two face-interior states.

rho_t = (1 - t) rho0 + t rho1 stays a state for t in [0, 1] and leaves
the PPT body at some nu > 1 whenever both endpoints share ranges. This
module locates nu by bracketing and bisection on the smallest
eigenvalues of rho_t and its partial transpose, classifies the boundary
state, samples the eigenvalue curves along the segment, and certifies
the boundary state as an edge state by searching its ranges for product
vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels as kernels
from .bipartite import PSD_TOL, BipartiteState, StateType, partial_transpose, range_space, state_type
from .linalg import DEFAULT_TOL, Subspace, Tolerance
from .solver import PairEquationProblem, PairSolutionSet, SearchOptions, solve_pair_equation

__all__ = [
    "BindingSide",
    "BoundaryResult",
    "EigenvalueCurves",
    "PathProblem",
    "certify_boundary_type_bound",
    "eigenvalue_curves",
    "find_boundary_nu",
    "rho_at",
]

_BISECT_WIDTH = 1e-8
_DEGENERATE_TOL = 1e-12
_MAX_DOUBLINGS = 200


class BindingSide(Enum):
    """Which positivity constraint fails first past the boundary."""

    STATE = "state"
    PARTIAL_TRANSPOSE = "partial_transpose"


@dataclass(frozen=True)
class PathProblem:
    """Segment data: two PPT states sharing the face of (tensor, conjugate) spaces."""

    rho0: BipartiteState
    rho1: BipartiteState
    tensor_space: Subspace
    conjugate_space: Subspace

    def __post_init__(self):
        if self.rho0.dims != self.rho1.dims:
            raise ValueError("endpoint states have different dimensions")
        for rho in (self.rho0, self.rho1):
            gamma = partial_transpose(rho)
            if kernels.hermitian_eigvalsh(gamma)[0] < -PSD_TOL:
                raise ValueError("endpoint states must be PPT")
        if not range_space(self.rho0).equals(self.tensor_space):
            raise ValueError("rho0 must have range equal to the tensor space")
        gamma0 = partial_transpose(self.rho0)
        if not range_space(gamma0, dims=self.rho0.dims).equals(self.conjugate_space):
            raise ValueError("rho0 transpose range must equal the conjugate space")


def rho_at(prob: PathProblem, t: float) -> np.ndarray:
    """The raw Hermitian unit-trace matrix (1 - t) rho0 + t rho1.

    Past the boundary this is no longer positive semidefinite, so a
    plain matrix is returned rather than a state.
    """
    return (1.0 - t) * prob.rho0.matrix + t * prob.rho1.matrix


@dataclass
class BoundaryResult:
    """Largest PPT parameter along the segment and the state found there."""

    nu: float
    bracket: tuple[float, float]
    state_at_nu: BipartiteState
    type_at_nu: StateType
    binding_side: BindingSide | None
    edge_certified: bool
    degenerate: bool = False
    pair_solutions: PairSolutionSet | None = None


def _min_eigenvalues(prob: PathProblem, t: float) -> tuple[float, float]:
    rho = rho_at(prob, t)
    gamma = partial_transpose(rho, prob.rho0.dims)
    return (
        float(kernels.hermitian_eigvalsh(rho)[0]),
        float(kernels.hermitian_eigvalsh(gamma)[0]),
    )


def find_boundary_nu(prob: PathProblem, tol: Tolerance = DEFAULT_TOL,
                     search: SearchOptions | None = None,
                     certify_edge: bool = True) -> BoundaryResult:
    """Largest t with rho_t PPT, located to a bracket of width 1e-8.

    The bracket grows by doubling from t = 1 before bisection, so no
    monotonicity beyond the bracketed interval is assumed. The binding
    side records which eigenvalue crosses the -1e-10 floor at the far
    bracket end. When requested, the boundary state is certified as an
    edge state by running the product-vector search on its ranges.
    """
    m, n = prob.rho0.dims
    rho1 = prob.rho1
    if np.linalg.norm(rho1.matrix - prob.rho0.matrix) <= _DEGENERATE_TOL:
        return BoundaryResult(
            nu=math.inf,
            bracket=(math.inf, math.inf),
            state_at_nu=prob.rho0,
            type_at_nu=state_type(prob.rho0, tol),
            binding_side=None,
            edge_certified=False,
            degenerate=True,
        )
    if not range_space(rho1, tol=tol).equals(prob.tensor_space):
        raise ValueError("rho1 range differs from rho0's: the segment has no PPT extension")
    gamma1 = partial_transpose(rho1)
    if not range_space(gamma1, dims=rho1.dims, tol=tol).equals(prob.conjugate_space):
        raise ValueError(
            "rho1 transpose range is a proper subspace: mixtures of six or fewer "
            "product states lose positivity immediately past t = 1"
        )

    def is_ppt(t: float) -> bool:
        return min(_min_eigenvalues(prob, t)) >= -PSD_TOL

    if not is_ppt(1.0):
        raise ValueError("rho1 itself is not PPT within tolerance")
    lo, step = 1.0, 1.0
    for _ in range(_MAX_DOUBLINGS):
        hi = lo + step
        if not is_ppt(hi):
            break
        lo = hi
        step *= 2.0
    else:
        raise RuntimeError("no PPT exit found while doubling the bracket")
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if is_ppt(mid):
            lo = mid
        else:
            hi = mid

    state_min, gamma_min = _min_eigenvalues(prob, hi)
    binding = BindingSide.STATE if state_min < gamma_min else BindingSide.PARTIAL_TRANSPOSE
    boundary_state = BipartiteState((m, n), rho_at(prob, lo))
    pair_solutions = None
    edge_certified = False
    if certify_edge:
        gamma = partial_transpose(boundary_state)
        problem = PairEquationProblem(
            tensor_space=range_space(boundary_state, tol=tol),
            conjugate_space=range_space(gamma, dims=(m, n), tol=tol),
            search=search or SearchOptions(),
        )
        pair_solutions = solve_pair_equation(problem)
        edge_certified = len(pair_solutions.solutions) == 0
    return BoundaryResult(
        nu=lo,
        bracket=(lo, hi),
        state_at_nu=boundary_state,
        type_at_nu=state_type(boundary_state, tol),
        binding_side=binding,
        edge_certified=edge_certified,
        pair_solutions=pair_solutions,
    )


@dataclass
class EigenvalueCurves:
    """Sampled spectra along the segment, ascending within each row."""

    ts: np.ndarray
    state_eigenvalues: np.ndarray
    transpose_eigenvalues: np.ndarray


def eigenvalue_curves(prob: PathProblem, t_min: float, t_max: float,
                      samples: int) -> EigenvalueCurves:
    """Spectra of rho_t and of its partial transpose on an even t grid."""
    if not t_min < t_max:
        raise ValueError("need t_min < t_max")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    ts = np.linspace(t_min, t_max, samples)
    rhos = np.array([rho_at(prob, t) for t in ts])
    gammas = np.array([partial_transpose(r, prob.rho0.dims) for r in rhos])
    return EigenvalueCurves(
        ts=ts,
        state_eigenvalues=kernels.hermitian_eigvalsh_batch(rhos),
        transpose_eigenvalues=kernels.hermitian_eigvalsh_batch(gammas),
    )


def certify_boundary_type_bound(result: BoundaryResult) -> bool:
    """Check the boundary state has rank 5 and transpose rank 5 or 6.

    A False here flags a numerical-tolerance failure rather than a
    mathematical finding; boundary states of this family cannot have
    rank below five.
    """
    p, q = result.type_at_nu
    return p == 5 and q in (5, 6)
