import numpy as np
import pytest

from sepfaces import (
    ConstructionParams,
    PairEquationProblem,
    PathProblem,
    SearchOptions,
    construct,
    find_boundary_nu,
    solve_pair_equation,
)
from sepfaces import _kernels as kernels

# parameter grid spanning the admissible region, including points close
# to the degenerate-root boundary
ADMISSIBLE_GRID = [
    ConstructionParams(a, f * 4.0 * a**3 / 27.0)
    for a in (1.0, 2.0, 3.0, 5.0)
    for f in (0.25, 0.5, 0.75)
]


@pytest.fixture(scope="session")
def example():
    """The a=2, b=1 construction used throughout."""
    return construct(ConstructionParams(2.0, 1.0))


@pytest.fixture(scope="session")
def example_path(example):
    return PathProblem(
        rho0=example.rho0,
        rho1=example.rho1,
        tensor_space=example.tensor_space,
        conjugate_space=example.conjugate_space,
    )


@pytest.fixture(scope="session")
def example_boundary(example, example_path):
    return find_boundary_nu(example_path, search=SearchOptions.for_params(example.params))


@pytest.fixture(scope="session")
def example_solutions(example):
    problem = PairEquationProblem(
        example.tensor_space,
        example.conjugate_space,
        SearchOptions.for_params(example.params),
    )
    return solve_pair_equation(problem)


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.backend_name()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


def random_state(rng, d=8):
    """Random full-rank density matrix."""
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    M = A @ A.conj().T
    return M / np.trace(M).real


def random_unitary(rng, d):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(A)
    return Q * (np.diagonal(R) / np.abs(np.diagonal(R)))
