"""Deterministic dense complex linear algebra at small sizes.

Hermitian eigendecomposition (cyclic Jacobi), numerical rank, reduced
row echelon form, orthogonal complements and Hilbert-Schmidt Gram
ranks. Matrices here are at most a few dozen rows, so fixed-order
O(n^3) methods are preferred over tuned library calls: every result is
a pure, reproducible function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels

__all__ = [
    "DEFAULT_TOL",
    "DimensionError",
    "Subspace",
    "Tolerance",
    "hermitian_eigen",
    "hermitian_gram_rank",
    "orthogonal_complement",
    "rank",
    "rank_batch",
    "rref",
    "singular_values",
]


class DimensionError(ValueError):
    """Operands have incompatible or invalid shapes."""


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    rank_cut is relative to the largest singular value when counting
    nonzero singular values; match_tol bounds entrywise comparisons.
    """

    rank_cut: float = 1e-9
    match_tol: float = 1e-10

    def __post_init__(self):
        if not (self.rank_cut > 0 and self.match_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = Tolerance()


def as_complex_matrix(M) -> np.ndarray:
    """Validate and convert to a 2-d complex128 array with finite entries."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"expected a nonempty 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a vector so its first significant component is real positive."""
    mags = np.abs(v)
    top = mags.max()
    if top == 0.0:
        return v
    lead = int(np.flatnonzero(mags > 1e-12 * top)[0])
    phase = v[lead] / mags[lead]
    return v * np.conj(phase)


def hermitian_eigen(M, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (M + M*)/2 before the Jacobi sweeps, so
    matrices Hermitian only up to match_tol are accepted. Returns
    ascending eigenvalues and unitary eigenvector columns; each column
    carries the first-significant-component-real-positive phase so the
    output is reproducible even on degenerate spectra.
    """
    A = as_complex_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError("eigendecomposition requires a square matrix")
    H = 0.5 * (A + A.conj().T)
    w, V = kernels.hermitian_eigh(H)
    for j in range(V.shape[1]):
        V[:, j] = _fix_phase(V[:, j])
    return w, V


def _embed(A: np.ndarray) -> np.ndarray:
    """Hermitian block embedding [[0, A], [A*, 0]]; eigenvalues are +-sigma(A).

    Avoids forming A A*, whose eigenvalues only resolve singular values
    down to sqrt(eps) of the largest; the embedding keeps them accurate
    to the Jacobi convergence threshold, which the 1e-9 rank cut needs.
    """
    r, c = A.shape[-2], A.shape[-1]
    H = np.zeros(A.shape[:-2] + (r + c, r + c), dtype=np.complex128)
    H[..., :r, r:] = A
    H[..., r:, :r] = np.conj(np.swapaxes(A, -1, -2))
    return H


def singular_values(M) -> np.ndarray:
    """Descending singular values, via the Hermitian block embedding."""
    A = as_complex_matrix(M)
    w = kernels.hermitian_eigvalsh(_embed(A))
    k = min(A.shape)
    return np.clip(w[::-1][:k], 0.0, None)


def rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above rank_cut times the largest one."""
    s = singular_values(M)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_cut * s[0]))


def rank_batch(stack: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Ranks of a stack of matrices, shape (N, r, c), in one batched pass."""
    S = np.asarray(stack, dtype=np.complex128)
    if S.ndim != 3:
        raise DimensionError("rank_batch expects shape (N, rows, cols)")
    k = min(S.shape[1], S.shape[2])
    w = kernels.hermitian_eigvalsh_batch(_embed(S))
    sigma = np.clip(w[:, ::-1][:, :k], 0.0, None)
    top = sigma[:, 0]
    return (sigma > tol.rank_cut * top[:, None]).sum(axis=1).astype(int)


def rref(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Reduced row echelon form with largest-modulus pivoting.

    Pivots smaller than rank_cut times the largest input magnitude are
    treated as zero; after elimination, entries below rank_cut times
    their row's maximum magnitude are zeroed, which makes the function
    idempotent in floating point.
    """
    A = as_complex_matrix(M).copy()
    rows, cols = A.shape
    scale = np.abs(A).max()
    if scale == 0.0:
        return A
    lead = 0
    for c in range(cols):
        if lead == rows:
            break
        piv = int(np.argmax(np.abs(A[lead:, c]))) + lead
        if np.abs(A[piv, c]) <= tol.rank_cut * scale:
            A[lead:, c] = 0.0
            continue
        if piv != lead:
            A[[lead, piv]] = A[[piv, lead]]
        A[lead] = A[lead] / A[lead, c]
        A[lead, c] = 1.0
        others = np.arange(rows) != lead
        A[others] -= np.outer(A[others, c], A[lead])
        A[others, c] = 0.0
        lead += 1
    for i in range(rows):
        m = np.abs(A[i]).max()
        if m > 0.0:
            A[i][np.abs(A[i]) < tol.rank_cut * m] = 0.0
    return A


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^n given by an n x d matrix with orthonormal columns.

    Membership and equality are decided by projection residuals; the
    default residual threshold of 1e-8 is shared by every caller so
    span comparisons mean the same thing package-wide.
    """

    basis: np.ndarray

    MEMBERSHIP_TOL = 1e-8

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=np.complex128)
        if B.ndim != 2:
            raise DimensionError("subspace basis must be a 2-d array")
        object.__setattr__(self, "basis", B)
        if B.shape[1] > 0:
            G = B.conj().T @ B
            if np.abs(G - np.eye(B.shape[1])).max() > 1e-10:
                raise ValueError("subspace basis columns are not orthonormal")

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def full_space(cls, n: int) -> "Subspace":
        return cls(np.eye(n, dtype=np.complex128))

    def project(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.complex128)
        return self.basis @ (self.basis.conj().T @ v)

    def residual(self, v) -> float:
        """Relative distance of v from the subspace, in [0, 1]."""
        v = np.asarray(v, dtype=np.complex128)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return 0.0
        return float(np.linalg.norm(v - self.project(v)) / nv)

    def contains(self, v, tol: float = MEMBERSHIP_TOL) -> bool:
        return self.residual(v) <= tol

    def contains_subspace(self, other: "Subspace", tol: float = MEMBERSHIP_TOL) -> bool:
        return all(self.residual(other.basis[:, j]) <= tol for j in range(other.dim))

    def equals(self, other: "Subspace", tol: float = MEMBERSHIP_TOL) -> bool:
        return (
            self.dim == other.dim
            and self.contains_subspace(other, tol)
            and other.contains_subspace(self, tol)
        )

    def complement(self, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        if self.dim == 0:
            return Subspace.full_space(self.ambient_dim)
        return orthogonal_complement(list(self.basis.T), tol=tol)


def orthogonal_complement(vectors, ambient_dim: int | None = None,
                          tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the subspace orthogonal to all given vectors.

    An empty input returns the full space (ambient_dim is then required).
    """
    vecs = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
    if not vecs:
        if ambient_dim is None:
            raise DimensionError("empty input needs an explicit ambient_dim")
        return Subspace.full_space(ambient_dim)
    n = vecs[0].size
    if any(v.size != n for v in vecs):
        raise DimensionError("all vectors must have the same length")
    A = np.array(vecs)
    # kernel of conj(A): u with <v_i, u> = 0 for every input vector.
    # The kernel dimension comes from the embedding-based rank (the small
    # eigenvalues of H alone cannot resolve a 1e-9 cut); the kernel basis
    # is the matching count of smallest eigenvectors of H.
    dim = n - rank(A, tol)
    H = A.T @ np.conj(A)
    _, V = kernels.hermitian_eigh(H)
    B = V[:, :dim]
    for j in range(B.shape[1]):
        B[:, j] = _fix_phase(B[:, j])
    return Subspace(B)


def hermitian_gram_rank(states, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of the Hilbert-Schmidt Gram matrix Tr(A_i A_j).

    For Hermitian inputs this equals the dimension of their span in the
    real vector space of Hermitian matrices, i.e. it counts how many of
    them are linearly independent.
    """
    mats = [as_complex_matrix(s) for s in states]
    if not mats:
        return 0
    shape = mats[0].shape
    if shape[0] != shape[1]:
        raise DimensionError("gram rank requires square matrices")
    if any(m.shape != shape for m in mats):
        raise DimensionError("gram rank requires matrices of equal size")
    for m in mats:
        if np.abs(m - m.conj().T).max() > tol.match_tol * max(np.abs(m).max(), 1.0):
            raise ValueError("gram rank inputs must be Hermitian")
    S = np.array(mats)
    G = np.einsum("aij,bji->ab", S, S)
    return rank(G, tol)
