"""Numeric search for product vectors subject to a membership pair.

Given subspaces (T, C) of C^2 (x) C^n, find every product vector
x (x) y in T whose partial conjugate conj(x) (x) y lies in C. Writing
x = (1, s), the orthogonality constraints stack into a matrix M(s) that
is affine in s and conj(s) separately, so y exists iff the smallest
singular value of M(s) vanishes. That function is not holomorphic in s,
which rules out polynomial root finding; instead the solver scans a
disk grid in each of the two projective charts, refines every local
minimum by Nelder-Mead, and keeps refined points whose recomputed
membership residuals pass. The chart x = (t, 1) catches solutions at or
near infinity, e.g. x = (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import _kernels as kernels
from .bipartite import ProductVector
from .linalg import DimensionError, Subspace

__all__ = [
    "NonFiniteSolutionSetError",
    "PairEquationProblem",
    "PairSolutionSet",
    "SearchOptions",
    "canonical_product_vector",
    "membership_residual",
    "solve_pair_equation",
]

_CANDIDATE_CAP = 128
_CLEAN_REL = 1e-10


class NonFiniteSolutionSetError(ValueError):
    """The constraint count admits a positive-dimensional solution variety."""


@dataclass(frozen=True)
class SearchOptions:
    """Grid scan and refinement controls.

    grid_radius bounds |s| in each chart (the default equals the
    a + b + 2 root bound at a=2, b=1); grid_steps is the sample count
    per axis. Duplicates are merged by chordal distance on the
    projective line, which never exceeds |s - s'|.
    """

    grid_radius: float = 5.0
    grid_steps: int = 200
    refine_tol: float = 1e-12
    residual_accept: float = 1e-8
    dedupe_tol: float = 1e-6

    def __post_init__(self):
        values = (self.grid_radius, self.refine_tol, self.residual_accept, self.dedupe_tol)
        if any(v <= 0 for v in values):
            raise ValueError("search options must be positive")
        if self.grid_steps < 16:
            raise ValueError("grid_steps must be at least 16")

    @classmethod
    def for_params(cls, params, **overrides) -> "SearchOptions":
        """Radius a + b + 2, large enough for every root of the modulus cubics."""
        overrides.setdefault("grid_radius", params.a + params.b + 2.0)
        return cls(**overrides)


@dataclass(frozen=True)
class PairEquationProblem:
    tensor_space: Subspace
    conjugate_space: Subspace
    search: SearchOptions = SearchOptions()

    def __post_init__(self):
        if self.tensor_space.dim < 1 or self.conjugate_space.dim < 1:
            raise DimensionError("both subspaces must have dimension at least 1")
        if self.tensor_space.ambient_dim != self.conjugate_space.ambient_dim:
            raise DimensionError("subspaces live in different ambient spaces")
        if self.tensor_space.ambient_dim % 2:
            raise DimensionError("ambient dimension must be 2n")


@dataclass(frozen=True)
class PairSolutionSet:
    """Solutions plus the evidence the scan left behind.

    parameters holds the projective coordinate s of each solution
    (None for the chart at infinity). rejected_minimum is the smallest
    refined objective among candidates that did not become solutions;
    exhaustive_claim is the grid heuristic that all minima are isolated
    and accounted for. It is evidence, not proof.
    """

    solutions: tuple[ProductVector, ...]
    residuals: tuple[float, ...]
    parameters: tuple[complex | None, ...]
    exhaustive_claim: bool
    rejected_minimum: float
    grid_minimum: float


def membership_residual(pv: ProductVector, tensor_space: Subspace,
                        conjugate_space: Subspace) -> float:
    """Worst of the two normalized projection residuals for the pair."""
    return max(
        tensor_space.residual(pv.tensor()),
        conjugate_space.residual(pv.partial_conjugate()),
    )


def _clean(v: np.ndarray, rel: float = _CLEAN_REL) -> np.ndarray:
    out = v.copy()
    out[np.abs(out) <= rel * np.abs(out).max()] = 0.0
    return out


def canonical_product_vector(pv: ProductVector) -> ProductVector:
    """First nonzero component of x scaled to 1; y unit with real-positive lead."""
    x = _clean(pv.x)
    y = _clean(pv.y)
    i = int(np.flatnonzero(x)[0])
    x = x / x[i]
    x[i] = 1.0
    y = y / np.linalg.norm(y)
    j = int(np.flatnonzero(y)[0])
    mag = abs(y[j])
    y = y * (np.conj(y[j]) / mag)
    y[j] = mag
    return ProductVector(x, y)


def _chordal(p: complex | None, q: complex | None) -> float:
    """Chordal metric on the projective line; None is the point at infinity."""
    if p is None and q is None:
        return 0.0
    if p is None:
        return 1.0 / math.sqrt(1.0 + abs(q) ** 2)
    if q is None:
        return 1.0 / math.sqrt(1.0 + abs(p) ** 2)
    return abs(p - q) / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


def _chart_factors(ss: np.ndarray, chart: int) -> tuple[np.ndarray, np.ndarray]:
    ones = np.ones_like(ss)
    return (ones, ss) if chart == 0 else (ss, ones)


def _stack_matrices(ss: np.ndarray, chart: int, CU: np.ndarray, CV: np.ndarray) -> np.ndarray:
    """Constraint matrices M(s) for a batch of chart coordinates, shape (N, k, n)."""
    x0, x1 = _chart_factors(ss, chart)
    blocks = []
    if CU.shape[0]:
        blocks.append(x0[:, None, None] * CU[None, :, 0, :] + x1[:, None, None] * CU[None, :, 1, :])
    if CV.shape[0]:
        c0, c1 = np.conj(x0), np.conj(x1)
        blocks.append(c0[:, None, None] * CV[None, :, 0, :] + c1[:, None, None] * CV[None, :, 1, :])
    return np.concatenate(blocks, axis=1)


def _sigma_min_batch(ss: np.ndarray, chart: int, CU: np.ndarray, CV: np.ndarray) -> np.ndarray:
    M = _stack_matrices(ss, chart, CU, CV)
    G = np.einsum("nij,nik->njk", M.conj(), M)
    w = kernels.hermitian_eigvalsh_batch(G)[:, 0]
    return np.sqrt(np.clip(w, 0.0, None))


def _sigma_min_single(s: complex, chart: int, CU: np.ndarray, CV: np.ndarray) -> float:
    # block embedding [[0, M], [M*, 0]]: eigenvalues are +-sigma(M), so the
    # refinement objective stays accurate to ~1e-14 instead of sqrt(eps)
    M = _stack_matrices(np.array([s]), chart, CU, CV)[0]
    k, n = M.shape
    H = np.zeros((k + n, k + n), dtype=np.complex128)
    H[:k, k:] = M
    H[k:, :k] = M.conj().T
    w = kernels.hermitian_eigvalsh(H)
    return max(float(w[k]), 0.0)


def _kernel_vector(s: complex, chart: int, CU: np.ndarray, CV: np.ndarray) -> np.ndarray:
    M = _stack_matrices(np.array([s]), chart, CU, CV)[0]
    _, V = kernels.hermitian_eigh(M.conj().T @ M)
    return V[:, 0]


def _conjugate_rows(space: Subspace, n: int) -> np.ndarray:
    """Complement basis reshaped to constraint rows, shape (k, 2, n)."""
    perp = space.complement()
    if perp.dim == 0:
        return np.zeros((0, 2, n), dtype=np.complex128)
    return np.conj(perp.basis.T).reshape(perp.dim, 2, n)


def _grid_candidates(chart: int, CU: np.ndarray, CV: np.ndarray,
                     opts: SearchOptions) -> tuple[list[tuple[float, complex]], float]:
    """Local minima of sigma_min on the disk grid, with the global grid floor."""
    g = opts.grid_steps
    axis = np.linspace(-opts.grid_radius, opts.grid_radius, g)
    re, im = np.meshgrid(axis, axis, indexing="ij")
    S = re + 1j * im
    inside = np.abs(S) <= opts.grid_radius
    vals = np.full(S.shape, np.inf)
    vals[inside] = _sigma_min_batch(S[inside].ravel(), chart, CU, CV)

    # Lipschitz bound on sigma_min along the chart coordinate gives a
    # safe cutoff: any true zero pulls a neighboring grid value below it
    step = 2.0 * opts.grid_radius / (g - 1)
    part = 1 if chart == 0 else 0
    lip = 0.0
    if CU.shape[0]:
        lip += math.sqrt(float((np.abs(CU[:, part, :]) ** 2).sum()))
    if CV.shape[0]:
        lip += math.sqrt(float((np.abs(CV[:, part, :]) ** 2).sum()))
    cutoff = 4.0 * step * max(lip, 1e-6)

    padded = np.pad(vals, 1, constant_values=np.inf)
    neighbor_min = np.full(S.shape, np.inf)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = padded[1 + di:1 + di + g, 1 + dj:1 + dj + g]
            neighbor_min = np.minimum(neighbor_min, shifted)
    is_min = inside & (vals <= neighbor_min) & (vals <= cutoff)
    cands = [(float(vals[i, j]), complex(S[i, j])) for i, j in zip(*np.nonzero(is_min))]
    cands.sort(key=lambda t: (t[0], t[1].real, t[1].imag))
    floor = float(vals[inside].min()) if inside.any() else math.inf
    return cands[:_CANDIDATE_CAP], floor


def solve_pair_equation(prob: PairEquationProblem) -> PairSolutionSet:
    """Find all product vectors satisfying the membership pair.

    Raises NonFiniteSolutionSetError when the complement dimensions sum
    below n, in which case the solution variety is generically a curve
    rather than a finite set.
    """
    opts = prob.search
    n = prob.tensor_space.ambient_dim // 2
    CU = _conjugate_rows(prob.tensor_space, n)
    CV = _conjugate_rows(prob.conjugate_space, n)
    if CU.shape[0] + CV.shape[0] < n:
        raise NonFiniteSolutionSetError(
            "non-finite solution set expected: the membership pair imposes "
            f"{CU.shape[0] + CV.shape[0]} constraints on y in C^{n}"
        )

    def refine(chart: int, s0: complex) -> tuple[float, complex]:
        res = minimize(
            lambda p: _sigma_min_single(p[0] + 1j * p[1], chart, CU, CV),
            [s0.real, s0.imag],
            method="Nelder-Mead",
            options={"xatol": opts.refine_tol, "fatol": opts.refine_tol,
                     "maxiter": 800, "maxfev": 1600},
        )
        return float(res.fun), complex(res.x[0], res.x[1])

    refined: list[tuple[float, int, complex]] = []
    grid_minimum = math.inf
    for chart in (0, 1):
        cands, floor = _grid_candidates(chart, CU, CV, opts)
        grid_minimum = min(grid_minimum, floor)
        # the chart origin is always probed: its basin (a solution in the
        # opposite chart's far field) can be crowded out on coarse grids
        starts = [s0 for _, s0 in cands] + [0j]
        for s0 in starts:
            f, s = refine(chart, s0)
            if abs(s) > opts.grid_radius:
                # escaped the scanned disk chasing a far zero; the other
                # chart sees that zero near its origin, so re-refine there
                f2, s2 = refine(1 - chart, 1.0 / s)
                if f2 <= f:
                    refined.append((f2, 1 - chart, s2))
                    continue
            refined.append((f, chart, s))
    refined.sort(key=lambda t: (t[0], t[1], t[2].real, t[2].imag))

    accepted: list[tuple[complex | None, ProductVector, float]] = []
    rejected_minimum = math.inf
    for sigma, chart, s in refined:
        x = np.array([1.0, s]) if chart == 0 else np.array([s, 1.0])
        y = _kernel_vector(s, chart, CU, CV)
        pv = canonical_product_vector(ProductVector(x, y))
        param = None if pv.x[0] == 0 else complex(pv.x[1])
        if any(_chordal(param, p) <= opts.dedupe_tol for p, _, _ in accepted):
            continue
        residual = membership_residual(pv, prob.tensor_space, prob.conjugate_space)
        if residual <= opts.residual_accept:
            accepted.append((param, pv, residual))
        else:
            rejected_minimum = min(rejected_minimum, sigma)

    def order_key(item):
        param = item[0]
        if param is None:
            return (0, 0.0, 0.0)
        return (1, round(param.real, 9), round(param.imag, 9))

    accepted.sort(key=order_key)
    exhaustive = rejected_minimum > 100.0 * opts.residual_accept
    return PairSolutionSet(
        solutions=tuple(pv for _, pv, _ in accepted),
        residuals=tuple(r for _, _, r in accepted),
        parameters=tuple(p for p, _, _ in accepted),
        exhaustive_claim=exhaustive,
        rejected_minimum=rejected_minimum,
        grid_minimum=grid_minimum,
    )
