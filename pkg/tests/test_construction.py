import math

import numpy as np
import pytest

from sepfaces.bipartite import mix, SeparableDecomposition
from sepfaces.construction import (
    ConstructionParams,
    ParameterDomainError,
    conjugate_subspace,
    constraint_vector,
    expected_echelon_form,
    solve_modulus_cubics,
    tensor_subspace,
    verify_construction,
)

from conftest import ADMISSIBLE_GRID

PHI = (1 + math.sqrt(5)) / 2

# barycenter matrices for a=2, b=1 (integer entries over 400 and 360)
RHO0_NUM = np.array(
    [
        [71, 0, 0, 7, 0, 0, 7, 0],
        [0, 39, 0, 0, 39, 0, 0, 23],
        [0, 0, 31, 0, 0, 31, 0, 0],
        [7, 0, 0, 39, 0, 0, 39, 0],
        [0, 39, 0, 0, 39, 0, 0, 23],
        [0, 0, 31, 0, 0, 31, 0, 0],
        [7, 0, 0, 39, 0, 0, 39, 0],
        [0, 23, 0, 0, 23, 0, 0, 111],
    ]
)
RHO1_NUM = np.array(
    [
        [71, 0, 0, 7, 0, 0, 7, 0],
        [0, 39, 0, 0, 39, 0, 0, 23],
        [0, 0, 31, 0, 0, 31, 0, 0],
        [7, 0, 0, 39, 0, 0, 39, 0],
        [0, 39, 0, 0, 39, 0, 0, 23],
        [0, 0, 31, 0, 0, 31, 0, 0],
        [7, 0, 0, 39, 0, 0, 39, 0],
        [0, 23, 0, 0, 23, 0, 0, 71],
    ]
)


class TestParams:
    def test_boundary_rejected(self):
        with pytest.raises(ParameterDomainError) as err:
            ConstructionParams(3.0, 4.0)  # b equals the bound exactly
        assert "4*a^3/27" in str(err.value)

    def test_nonpositive_rejected(self):
        with pytest.raises(ParameterDomainError):
            ConstructionParams(2.0, 0.0)
        with pytest.raises(ParameterDomainError):
            ConstructionParams(-1.0, 0.01)

    def test_admissible_accepted(self):
        p = ConstructionParams(2.0, 1.0)
        assert (p.a, p.b) == (2.0, 1.0)


class TestCubicRoots:
    def test_golden_ratio_instance(self):
        r = solve_modulus_cubics(ConstructionParams(2.0, 1.0))
        assert abs(r.r1 - 1.0) <= 1e-12
        assert abs(r.r2 - PHI) <= 1e-12
        assert abs(r.r3 - (PHI - 1)) <= 1e-12

    def test_sqrt3_instance(self):
        r = solve_modulus_cubics(ConstructionParams(3.0, 2.0))
        assert abs(r.r1 - 1.0) <= 1e-12
        assert abs(r.r2 - (1 + math.sqrt(3))) <= 1e-12
        assert abs(r.r3 - (math.sqrt(3) - 1)) <= 1e-12

    @pytest.mark.parametrize("params", ADMISSIBLE_GRID, ids=lambda p: f"a{p.a}b{p.b:.3f}")
    def test_residuals_across_grid(self, params):
        r = solve_modulus_cubics(params)
        a, b = params.a, params.b
        scale = a**3 + b
        assert abs(r.r1**3 - a * r.r1**2 + b) <= 1e-12 * scale
        assert abs(r.r2**3 - a * r.r2**2 + b) <= 1e-12 * scale
        assert abs(r.r3**3 + a * r.r3**2 - b) <= 1e-12 * scale
        assert r.r1 < r.r2
        assert min(abs(r.r1 - r.r2), abs(r.r1 - r.r3), abs(r.r2 - r.r3)) > 1e-9


class TestSubspaces:
    def test_dimensions(self, example):
        assert example.tensor_space.dim == 5
        assert example.conjugate_space.dim == 7

    def test_solutions_inside(self, example):
        D, E = example.tensor_space, example.conjugate_space
        for pv in example.solutions:
            assert D.residual(pv.tensor()) <= 1e-10
            assert E.residual(pv.partial_conjugate()) <= 1e-10

    def test_defining_vectors_outside(self, example):
        from sepfaces.construction import ENTANGLED_TRIPLE

        assert not example.tensor_space.contains(ENTANGLED_TRIPLE[0])
        w = constraint_vector(example.params)
        assert not example.conjugate_space.contains(w)

    def test_alpha_one_inside(self):
        # (1,1) (x) (1,1,1,1) is the unit-parameter member of the family
        D = tensor_subspace()
        v = np.kron([1.0, 1.0], [1.0, 1.0, 1.0, 1.0])
        assert D.residual(v) <= 1e-12


class TestEnumerate:
    def test_count_and_order(self, example):
        sols = example.solutions
        assert len(sols) == 10
        assert np.array_equal(sols[0].x, [0.0, 1.0])
        assert np.array_equal(sols[0].y, [0.0, 0.0, 0.0, 1.0])
        r = example.roots
        firsts = [pv.x[1] for pv in sols[1:]]
        assert np.allclose(firsts[:3], r.r1 * np.exp(2j * np.pi * np.arange(3) / 3), atol=1e-12)
        assert np.allclose(firsts[3:6], r.r2 * np.exp(2j * np.pi * np.arange(3) / 3), atol=1e-12)
        assert np.allclose(firsts[6:], -r.r3 * np.exp(2j * np.pi * np.arange(3) / 3), atol=1e-12)

    def test_real_parameters_present(self, example):
        reals = sorted(a.real for a in example.alphas if abs(a.imag) < 1e-12)
        assert np.allclose(reals, [-(PHI - 1), 1.0, PHI], atol=1e-12)

    def test_cycle_closure(self, example):
        # the parameter multiset is closed under multiplication by the
        # primitive cube root of unity
        w = np.exp(2j * np.pi / 3)
        rotated = example.alphas * w
        for z in rotated:
            assert min(abs(z - a) for a in example.alphas) < 1e-10


class TestBarycenters:
    def test_rho0_matches_integer_matrix(self, example):
        assert np.abs(example.rho0.matrix - RHO0_NUM / 400).max() <= 1e-10

    def test_rho1_matches_integer_matrix(self, example):
        assert np.abs(example.rho1.matrix - RHO1_NUM / 360).max() <= 1e-10

    def test_unit_traces(self, example):
        assert abs(np.trace(example.rho0.matrix) - 1.0) <= 1e-12
        assert abs(np.trace(example.rho1.matrix) - 1.0) <= 1e-12

    def test_rho0_consistent_with_mix(self, example):
        alt = mix(SeparableDecomposition.uniform(example.solutions))
        assert np.linalg.norm(alt.matrix - example.rho0.matrix) <= 1e-12

    def test_interior_mixture_ranges(self, example, rng):
        from sepfaces.bipartite import partial_transpose, range_space

        w = rng.random(10) + 0.05
        state = mix(SeparableDecomposition(w / w.sum(), example.solutions))
        assert range_space(state).equals(example.tensor_space)
        gamma = partial_transpose(state)
        assert range_space(gamma, dims=(2, 4)).equals(example.conjugate_space)


class TestVerification:
    def test_example_report(self, example):
        rep = example.report
        assert rep.all_passed
        assert rep.gram_rank == 10
        assert rep.five_subsets_checked == 252 and not rep.five_span_failures
        assert rep.seven_subsets_checked == 120 and not rep.seven_span_failures
        assert rep.echelon_cases_match and len(rep.echelon_cases) == 5
        assert rep.alpha8_identity_residual <= 1e-9

    def test_face_counts(self, example):
        counts = dict(example.report.face_counts)
        assert counts == {k: math.comb(10, k + 1) for k in range(10)}
        assert counts[5] == 210

    def test_echelon_expected_entries(self):
        R = expected_echelon_form(ConstructionParams(2.0, 1.0))
        assert R[0, 5] == 0.5 and R[3, 5] == 0.5

    def test_sqrt3_instance_passes(self):
        rep = verify_construction(ConstructionParams(3.0, 2.0))
        assert rep.all_passed

    @pytest.mark.parametrize("params", ADMISSIBLE_GRID, ids=lambda p: f"a{p.a}b{p.b:.3f}")
    def test_admissible_grid_passes(self, params):
        rep = verify_construction(params)
        assert rep.all_passed, (params, rep.five_span_failures, rep.seven_span_failures)


def test_construct_bundles_everything(example):
    assert example.rho0.dims == (2, 4)
    assert len(example.alphas) == 9
    assert example.report.params == example.params


def test_conjugate_subspace_depends_on_params():
    E1 = conjugate_subspace(ConstructionParams(2.0, 1.0))
    E2 = conjugate_subspace(ConstructionParams(3.0, 2.0))
    assert not E1.equals(E2)
