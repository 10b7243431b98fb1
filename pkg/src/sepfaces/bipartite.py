"""Bipartite structure on C^m (x) C^n.

Product vectors and their partial conjugates, partial transposition,
separable mixtures, range spaces, face membership and (rank, transpose
rank) type classification. Everything is written for general small
(m, n); the rest of the package uses m=2, n=4.
"""

from __future__ import annotations

from enum import Enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels as kernels
from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    Subspace,
    Tolerance,
    as_complex_matrix,
    hermitian_eigen,
    rank,
)

__all__ = [
    "PSD_TOL",
    "BipartiteState",
    "FacePosition",
    "ProductVector",
    "SeparableDecomposition",
    "StateType",
    "in_face",
    "mix",
    "partial_transpose",
    "range_criterion_check",
    "range_space",
    "state_type",
]

# absolute floor for "positive semidefinite" on unit-trace matrices; the
# boundary search needs a signed predicate with a fixed threshold
PSD_TOL = 1e-10
TRACE_TOL = 1e-12


@dataclass(frozen=True)
class ProductVector:
    """A pair (x, y) representing the product vector x tensor y."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.complex128).ravel()
        y = np.asarray(self.y, dtype=np.complex128).ravel()
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("product vector factors must be finite")
        if np.linalg.norm(x) == 0.0 or np.linalg.norm(y) == 0.0:
            raise ValueError("product vector factors must be nonzero")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.x), len(self.y)

    def tensor(self) -> np.ndarray:
        """Kronecker vector x (x) y, x-index major."""
        return np.kron(self.x, self.y)

    def partial_conjugate(self) -> np.ndarray:
        """Kronecker vector conj(x) (x) y."""
        return np.kron(np.conj(self.x), self.y)

    def normalized(self) -> "ProductVector":
        return ProductVector(self.x / np.linalg.norm(self.x),
                             self.y / np.linalg.norm(self.y))


class StateType(NamedTuple):
    """Ranks (p, q) of a state and of its partial transpose."""

    p: int
    q: int


@dataclass(frozen=True)
class BipartiteState:
    """A density matrix on C^m (x) C^n: Hermitian, PSD, unit trace."""

    dims: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        m, n = self.dims
        A = as_complex_matrix(self.matrix)
        object.__setattr__(self, "matrix", A)
        if A.shape != (m * n, m * n):
            raise DimensionError(f"state of dims {self.dims} must be {m * n} x {m * n}")
        scale = max(np.abs(A).max(), 1.0)
        if np.abs(A - A.conj().T).max() > DEFAULT_TOL.match_tol * scale:
            raise ValueError("state matrix is not Hermitian")
        if abs(np.trace(A).real - 1.0) > TRACE_TOL or abs(np.trace(A).imag) > TRACE_TOL:
            raise ValueError("state matrix must have unit trace")
        if kernels.hermitian_eigvalsh(A)[0] < -PSD_TOL:
            raise ValueError("state matrix is not positive semidefinite")


@dataclass(frozen=True)
class SeparableDecomposition:
    """Convex combination data: positive weights and unit product vectors.

    Input vectors are normalized factor-wise on construction, so the
    stored tensors all have unit norm.
    """

    weights: np.ndarray
    vectors: tuple[ProductVector, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        vecs = tuple(v.normalized() for v in self.vectors)
        if len(w) != len(vecs) or len(w) == 0:
            raise ValueError("need one weight per product vector")
        if np.any(w <= 0.0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > TRACE_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "vectors", vecs)

    @classmethod
    def uniform(cls, vectors) -> "SeparableDecomposition":
        vectors = tuple(vectors)
        k = len(vectors)
        return cls(np.full(k, 1.0 / k), vectors)

    def __len__(self) -> int:
        return len(self.vectors)


class FacePosition(Enum):
    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INTERIOR = "interior"


def partial_transpose(state, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Transpose the first tensor factor: block (i, j) moves to (j, i).

    Accepts a BipartiteState or a raw matrix plus dims. Preserves
    Hermiticity and trace; applying it twice gives the input back.
    """
    if isinstance(state, BipartiteState):
        M, (m, n) = state.matrix, state.dims
    else:
        if dims is None:
            raise DimensionError("raw matrices need explicit dims")
        M, (m, n) = as_complex_matrix(state), dims
    if M.shape != (m * n, m * n):
        raise DimensionError(f"matrix shape {M.shape} does not match dims {(m, n)}")
    return M.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(m * n, m * n)


def mix(decomp: SeparableDecomposition) -> BipartiteState:
    """Assemble the separable state sum_i w_i |x_i(x)y_i><x_i(x)y_i|."""
    dims = decomp.vectors[0].dims
    if any(v.dims != dims for v in decomp.vectors):
        raise DimensionError("mixed product-vector dimensions")
    d = dims[0] * dims[1]
    M = np.zeros((d, d), dtype=np.complex128)
    for w, v in zip(decomp.weights, decomp.vectors):
        t = v.tensor()
        M += w * np.outer(t, t.conj())
    return BipartiteState(dims, M)


def state_type(state: BipartiteState, tol: Tolerance = DEFAULT_TOL) -> StateType:
    """Type (p, q): rank of the state and rank of its partial transpose."""
    return StateType(rank(state.matrix, tol), rank(partial_transpose(state), tol))


def range_space(state, dims: tuple[int, int] | None = None,
                tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Span of eigenvectors with eigenvalue above rank_cut times the largest."""
    M = state.matrix if isinstance(state, BipartiteState) else as_complex_matrix(state)
    w, V = hermitian_eigen(M, tol)
    top = np.abs(w).max()
    if top == 0.0:
        return Subspace(np.zeros((M.shape[0], 0), dtype=np.complex128))
    keep = w > tol.rank_cut * top
    return Subspace(V[:, keep])


def _min_eigenvalue(M: np.ndarray) -> float:
    return float(kernels.hermitian_eigvalsh(M)[0])


def in_face(state: BipartiteState, tensor_space: Subspace, conjugate_space: Subspace,
            tol: Tolerance = DEFAULT_TOL) -> FacePosition:
    """Locate a PPT state relative to the face cut out by the two subspaces.

    Interior: range equals tensor_space and transpose range equals
    conjugate_space. Boundary: both ranges contained, at least one
    strictly. Outside: a containment fails. Non-PPT input is rejected,
    since the face only contains PPT states.
    """
    gamma = partial_transpose(state)
    if _min_eigenvalue(state.matrix) < -PSD_TOL or _min_eigenvalue(gamma) < -PSD_TOL:
        raise ValueError("face membership is defined for PPT states only")
    r = range_space(state, tol=tol)
    rg = range_space(gamma, dims=state.dims, tol=tol)
    if not (tensor_space.contains_subspace(r) and conjugate_space.contains_subspace(rg)):
        return FacePosition.OUTSIDE
    if r.dim == tensor_space.dim and rg.dim == conjugate_space.dim:
        return FacePosition.INTERIOR
    return FacePosition.BOUNDARY


def range_criterion_check(state: BipartiteState, candidates, tol: Tolerance = DEFAULT_TOL,
                          membership_tol: float = Subspace.MEMBERSHIP_TOL) -> bool:
    """Test the range criterion against a list of candidate product vectors.

    True iff the candidates lying in the state's range, with partial
    conjugates in the transpose's range, span both ranges.
    """
    r = range_space(state, tol=tol)
    rg = range_space(partial_transpose(state), dims=state.dims, tol=tol)
    tensors, conjs = [], []
    for pv in candidates:
        t, c = pv.tensor(), pv.partial_conjugate()
        if r.residual(t) <= membership_tol and rg.residual(c) <= membership_tol:
            tensors.append(t)
            conjs.append(c)
    if not tensors:
        return False
    return rank(np.array(tensors), tol) == r.dim and rank(np.array(conjs), tol) == rg.dim
