"""The ten-product-vector construction on C^2 (x) C^4.

A five-dimensional tensor space (orthogonal to a fixed completely
entangled triple) and a seven-dimensional conjugate space (orthogonal
to one parameter-dependent vector) admit exactly ten product vectors
|x(x)y> in the first whose partial conjugates |conj(x)(x)y> lie in the
second. This module builds those spaces from parameters (a, b), solves
the modulus cubics for the nine finite solutions, assembles the two
barycenter states rho0 and rho1, and verifies the structural claims
exhaustively: pairwise independence of the ten product states, spanning
of every 5-subset of tensors and every 7-subset of conjugates, and the
echelon normal form of the representative 7-vector stacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .bipartite import BipartiteState, ProductVector
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    hermitian_gram_rank,
    orthogonal_complement,
    rank_batch,
    rref,
)

__all__ = [
    "ConstructionParams",
    "ConstructionResult",
    "CubicRoots",
    "ParameterDomainError",
    "VerificationReport",
    "build_rho0",
    "build_rho1",
    "conjugate_subspace",
    "constraint_vector",
    "construct",
    "enumerate_solutions",
    "expected_echelon_form",
    "product_vector",
    "solution_parameters",
    "solve_modulus_cubics",
    "tensor_subspace",
    "verify_construction",
]


class ParameterDomainError(ValueError):
    """Parameters outside the admissible region 0 < b < 4a^3/27."""


# the three vectors whose orthogonal complement hosts the product
# vectors; they span a completely entangled subspace of C^2 (x) C^4
ENTANGLED_TRIPLE = np.array(
    [
        [0, 1, 0, 0, -1, 0, 0, 0],
        [0, 0, 1, 0, 0, -1, 0, 0],
        [0, 0, 0, 1, 0, 0, -1, 0],
    ],
    dtype=np.complex128,
)

OMEGA = np.exp(2j * np.pi / 3)

# index sets of the five representative 7-subsets whose stacked partial
# conjugates are reduced to echelon form (solution order: the infinite
# solution first, then the nine finite ones radius by radius)
ECHELON_CASES = (
    (0, 1, 2, 3, 4, 5, 6),
    (0, 1, 2, 3, 4, 5, 7),
    (0, 1, 2, 4, 5, 7, 8),
    (1, 2, 3, 4, 5, 6, 7),
    (1, 2, 3, 4, 5, 7, 8),
)


@dataclass(frozen=True)
class ConstructionParams:
    """Positive reals (a, b) with b strictly below 4a^3/27.

    The bound keeps the cubic r^3 - a r^2 + b with three distinct real
    roots, two of them positive.
    """

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not (math.isfinite(a) and math.isfinite(b)) or a <= 0.0:
            raise ParameterDomainError(f"need a > 0 and finite parameters; got a={a}, b={b}")
        bound = 4.0 * a**3 / 27.0
        if not (0.0 < b < bound):
            raise ParameterDomainError(
                f"need 0 < b < 4*a^3/27 = {bound:.12g}; got a={a:.12g}, b={b:.12g}"
            )


@dataclass(frozen=True)
class CubicRoots:
    """Positive roots: r1 < r2 of r^3 - a r^2 + b, r3 of r^3 + a r^2 - b."""

    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        if not (0.0 < self.r1 < self.r2) or self.r3 <= 0.0:
            raise ValueError("roots must be positive with r1 < r2")
        gaps = (abs(self.r1 - self.r2), abs(self.r1 - self.r3), abs(self.r2 - self.r3))
        if min(gaps) <= 1e-9:
            raise ValueError("roots are not clearly distinct")


def constraint_vector(params: ConstructionParams) -> np.ndarray:
    """The vector (b,0,0,1,0,-a,0,0) whose orthogonal complement is the conjugate space."""
    return np.array([params.b, 0, 0, 1, 0, -params.a, 0, 0], dtype=np.complex128)


def tensor_subspace(tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """The 5-dimensional subspace orthogonal to the entangled triple."""
    return orthogonal_complement(list(ENTANGLED_TRIPLE), tol=tol)


def conjugate_subspace(params: ConstructionParams, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """The 7-dimensional subspace orthogonal to the constraint vector."""
    return orthogonal_complement([constraint_vector(params)], tol=tol)


def solve_modulus_cubics(params: ConstructionParams) -> CubicRoots:
    """Solve r^3 - a r^2 + b = 0 and r^3 + a r^2 - b = 0 for positive roots.

    The admissible region puts the first cubic in the three-real-root
    regime, so the roots come from the cosine form of the cubic formula;
    the second cubic is the first under r -> -r, so its positive root is
    minus the first one's negative root. Two Newton steps polish each
    root to machine residual.
    """
    a, b = params.a, params.b
    theta = math.acos(1.0 - 27.0 * b / (2.0 * a**3))
    radius = 2.0 * a / 3.0
    shift = a / 3.0
    r2 = shift + radius * math.cos(theta / 3.0)
    negative = shift + radius * math.cos((theta + 2.0 * math.pi) / 3.0)
    r1 = shift + radius * math.cos((theta + 4.0 * math.pi) / 3.0)

    def polish(r: float, c2: float, c0: float) -> float:
        for _ in range(2):
            f = ((r + c2) * r) * r + c0
            df = (3.0 * r + 2.0 * c2) * r
            r -= f / df
        return r

    r1 = polish(r1, -a, b)
    r2 = polish(r2, -a, b)
    r3 = polish(-negative, a, -b)
    scale = a**3 + b
    for r, c2, c0 in ((r1, -a, b), (r2, -a, b), (r3, a, -b)):
        if abs(((r + c2) * r) * r + c0) > 1e-12 * scale:
            raise ArithmeticError("cubic root failed to converge")
    return CubicRoots(r1, r2, r3)


def solution_parameters(roots: CubicRoots) -> np.ndarray:
    """The nine finite solution parameters: each modulus times the cube roots of 1 or -1."""
    r1, r2, r3 = roots.r1, roots.r2, roots.r3
    cycle = np.array([1.0, OMEGA, OMEGA**2])
    return np.concatenate([r1 * cycle, r2 * cycle, -r3 * cycle])


def product_vector(alpha: complex) -> ProductVector:
    """The product vector (1, a)^t (x) (1, a, a^2, a^3)^t of the family."""
    return ProductVector(
        np.array([1.0, alpha], dtype=np.complex128),
        np.array([1.0, alpha, alpha**2, alpha**3], dtype=np.complex128),
    )


def enumerate_solutions(params: ConstructionParams) -> list[ProductVector]:
    """All ten product vectors solving the membership pair for (a, b).

    Order is fixed: the solution at infinity (0,1)(x)(0,0,0,1) first,
    then the nine finite parameters radius by radius.
    """
    roots = solve_modulus_cubics(params)
    alphas = solution_parameters(roots)
    a, b = params.a, params.b
    scale = b + a * float(np.abs(alphas).max()) ** 2
    residuals = np.abs(b + alphas**3 - a * np.abs(alphas) ** 2)
    if residuals.max() > 1e-12 * scale:
        raise ArithmeticError("solution parameters fail the defining equation")
    solutions = [
        ProductVector(np.array([0.0, 1.0]), np.array([0.0, 0.0, 0.0, 1.0]))
    ]
    solutions.extend(product_vector(al) for al in alphas)
    return solutions


def _normalized_tensor(pv: ProductVector) -> np.ndarray:
    t = pv.tensor()
    return t / np.linalg.norm(t)


def build_rho0(params: ConstructionParams) -> BipartiteState:
    """Uniform mixture of all ten product states: the simplex barycenter."""
    vecs = [_normalized_tensor(pv) for pv in enumerate_solutions(params)]
    M = sum(np.outer(v, v.conj()) for v in vecs) / len(vecs)
    return BipartiteState((2, 4), M)


def build_rho1(params: ConstructionParams) -> BipartiteState:
    """Uniform mixture of the nine finite-parameter product states."""
    vecs = [_normalized_tensor(pv) for pv in enumerate_solutions(params)[1:]]
    M = sum(np.outer(v, v.conj()) for v in vecs) / len(vecs)
    return BipartiteState((2, 4), M)


def expected_echelon_form(params: ConstructionParams) -> np.ndarray:
    """Echelon form shared by all representative 7-subsets of conjugates.

    Pivots sit in columns 0-4, 6, 7; the free column 5 carries b/a in
    the first row and 1/a in the fourth.
    """
    R = np.zeros((7, 8), dtype=np.complex128)
    for row, col in enumerate((0, 1, 2, 3, 4, 6, 7)):
        R[row, col] = 1.0
    R[0, 5] = params.b / params.a
    R[3, 5] = 1.0 / params.a
    return R


@dataclass
class VerificationReport:
    """Outcome of the exhaustive structural checks for one parameter pair.

    Failed checks are recorded (with the violating subsets), never
    raised, so a report always comes back complete.
    """

    params: ConstructionParams
    ten_solutions_exact: bool
    max_defining_residual: float
    max_membership_residual: float
    product_states_independent: bool
    gram_rank: int
    five_span_tensor_space: bool
    five_span_failures: list[tuple[int, ...]]
    five_subsets_checked: int
    seven_span_conjugate_space: bool
    seven_span_failures: list[tuple[int, ...]]
    seven_subsets_checked: int
    echelon_cases: list[np.ndarray]
    echelon_cases_match: bool
    alpha8_identity_residual: float
    face_counts: list[tuple[int, int]] = field(default_factory=list)

    ALPHA8_BOUND = 1e-9

    @property
    def all_passed(self) -> bool:
        return (
            self.ten_solutions_exact
            and self.product_states_independent
            and self.five_span_tensor_space
            and self.seven_span_conjugate_space
            and self.echelon_cases_match
            and self.alpha8_identity_residual <= self.ALPHA8_BOUND
        )


def verify_construction(params: ConstructionParams,
                        tol: Tolerance = DEFAULT_TOL) -> VerificationReport:
    """Run every structural check for (a, b) and collect the evidence.

    Checks: the ten solutions satisfy the defining equations and the
    two subspace memberships; the ten product states are linearly
    independent (Hilbert-Schmidt Gram rank); all 252 five-subsets of
    tensors span the 5-dim tensor space and all 120 seven-subsets of
    partial conjugates span the 7-dim conjugate space; the five
    representative echelon forms match the expected normal form; the
    eighth-power modulus identity holds; and the sub-simplex face
    counts are binomial.
    """
    a, b = params.a, params.b
    D = tensor_subspace(tol)
    E = conjugate_subspace(params, tol)
    roots = solve_modulus_cubics(params)
    alphas = solution_parameters(roots)
    solutions = enumerate_solutions(params)

    tensors = np.array([pv.tensor() for pv in solutions])
    conjugates = np.array([pv.partial_conjugate() for pv in solutions])

    scale = b + a * float(np.abs(alphas).max()) ** 2
    max_defining = float(np.abs(b + alphas**3 - a * np.abs(alphas) ** 2).max())
    memberships = [D.residual(t) for t in tensors] + [E.residual(c) for c in conjugates]
    max_membership = float(max(memberships))
    ten_exact = max_defining <= 1e-12 * scale and max_membership <= 1e-10

    units = tensors / np.linalg.norm(tensors, axis=1)[:, None]
    projectors = [np.outer(u, u.conj()) for u in units]
    gram = hermitian_gram_rank(projectors, tol)

    five_idx = list(combinations(range(10), 5))
    five_ranks = rank_batch(tensors[np.array(five_idx)], tol)
    five_failures = [five_idx[i] for i in np.flatnonzero(five_ranks != 5)]

    seven_idx = list(combinations(range(10), 7))
    seven_ranks = rank_batch(conjugates[np.array(seven_idx)], tol)
    seven_failures = [seven_idx[i] for i in np.flatnonzero(seven_ranks != 7)]

    expected = expected_echelon_form(params)
    cases = [rref(conjugates[list(ix)], tol) for ix in ECHELON_CASES]
    cases_match = all(np.abs(c - expected).max() <= 1e-9 for c in cases)

    mods = np.abs(alphas)
    alpha8 = float(np.abs(mods**8 - (a**2 * mods**6 - 2 * a * b * mods**4 + b**2 * mods**2)).max())

    return VerificationReport(
        params=params,
        ten_solutions_exact=ten_exact,
        max_defining_residual=max_defining,
        max_membership_residual=max_membership,
        product_states_independent=(gram == 10),
        gram_rank=int(gram),
        five_span_tensor_space=not five_failures,
        five_span_failures=five_failures,
        five_subsets_checked=len(five_idx),
        seven_span_conjugate_space=not seven_failures,
        seven_span_failures=seven_failures,
        seven_subsets_checked=len(seven_idx),
        echelon_cases=cases,
        echelon_cases_match=cases_match,
        alpha8_identity_residual=alpha8,
        face_counts=[(k, math.comb(10, k + 1)) for k in range(10)],
    )


@dataclass(frozen=True)
class ConstructionResult:
    """Everything the construction produces for one parameter pair."""

    params: ConstructionParams
    roots: CubicRoots
    alphas: np.ndarray
    solutions: tuple[ProductVector, ...]
    tensor_space: Subspace
    conjugate_space: Subspace
    rho0: BipartiteState
    rho1: BipartiteState
    report: VerificationReport


def construct(params: ConstructionParams, tol: Tolerance = DEFAULT_TOL) -> ConstructionResult:
    """Build subspaces, solutions, barycenter states and the verification report."""
    roots = solve_modulus_cubics(params)
    return ConstructionResult(
        params=params,
        roots=roots,
        alphas=solution_parameters(roots),
        solutions=tuple(enumerate_solutions(params)),
        tensor_space=tensor_subspace(tol),
        conjugate_space=conjugate_subspace(params, tol),
        rho0=build_rho0(params),
        rho1=build_rho1(params),
        report=verify_construction(params, tol),
    )
