import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from phasecell.errors import DimensionMismatchError, MemoryBudgetError
from phasecell.klein_gordon import assemble_kg_operator_4d, initial_state, run_trajectory
from phasecell.lattice_ops import TruncatedBasis, WaveFunction, commutator, interior_norm, max_norm
from phasecell.poincare import (
    PAIRS,
    PoincareParams,
    build_finite_transform,
    build_generators,
    check_boost_invariance_3plus1,
    check_casimir_commutation,
    check_kg_invariance_4d,
    expm,
    first_order_generator,
    group_inverse_defect,
    identity_defect,
    interior_test_vector,
    rotation_residual_ratio,
    transform_exponent,
)

ETA = np.diag([1.0, 1.0, 1.0, -1.0])


@pytest.fixture(scope="module")
def gens5():
    return build_generators((TruncatedBasis(5, 3),) * 4)


class TestParams:
    def test_from_upper_roundtrip(self):
        p = PoincareParams.from_upper((1, 2, 3, 4), (0.1, 0.2, 0.3, 0.4, 0.5, 0.6))
        assert p.upper() == (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        assert p.omega[1, 0] == -0.1
        assert not p.is_translation and not p.is_zero

    def test_validation(self):
        with pytest.raises(ValueError):
            PoincareParams(omega=np.ones((4, 4)))
        with pytest.raises(ValueError):
            PoincareParams((1, 2, 3))

    def test_negation(self):
        p = PoincareParams.from_upper((1, 0, 0, 0), (0.1, 0, 0, 0, 0, 0))
        assert (-p).c_mu == (-1.0, 0.0, 0.0, 0.0)
        assert (-p).omega[0, 1] == -0.1


class TestGenerators:
    def test_hermitian(self, gens5):
        for g in gens5.all_ten().values():
            assert max_norm(g - g.H) == 0.0
        assert max_norm(gens5.casimir - gens5.casimir.H) == 0.0

    def test_translations_commute(self, gens5):
        for a in range(4):
            for b in range(4):
                assert max_norm(commutator(gens5.P[a], gens5.P[b])) == 0.0

    def test_j_antisymmetric_in_indices(self, gens5):
        assert max_norm(gens5.J(2, 1) + gens5.J(1, 2)) == 0.0
        assert max_norm(gens5.J(3, 3)) == 0.0

    def test_lorentz_algebra_on_interior(self, gens5):
        J = gens5.J
        for a, b in PAIRS:
            for c, d in PAIRS:
                lhs = commutator(J(a, b), J(c, d))
                rhs = (J(a, d) * ETA[b, c] - J(b, d) * ETA[a, c] - J(a, c) * ETA[b, d] + J(b, c) * ETA[a, d]) * -1j
                assert interior_norm(lhs - rhs, 3) < 1e-12

    def test_translation_algebra_on_interior(self, gens5):
        for a, b in PAIRS:
            for c in range(4):
                lhs = commutator(gens5.J(a, b), gens5.P[c])
                rhs = (gens5.P[a] * ETA[b, c] - gens5.P[b] * ETA[a, c]) * -1j
                assert interior_norm(lhs - rhs, 3) < 1e-12

    def test_casimir_commutes_on_interior_only(self, gens5):
        results = check_casimir_commutation(gens5, margin=3)
        assert len(results) == 10
        assert all(r.passed for r in results)
        # the boundary really is there
        assert max(r.norm_full for r in results) > 1.0

    def test_budget_and_axes(self):
        with pytest.raises(MemoryBudgetError):
            build_generators((TruncatedBasis(20),) * 4)
        with pytest.raises(DimensionMismatchError):
            build_generators((TruncatedBasis(3),) * 3)


class TestExpm:
    @given(st.integers(0, 10_000), st.floats(0.01, 20.0))
    @settings(max_examples=25, deadline=None)
    def test_against_scipy(self, seed, scale):
        a = np.random.default_rng(seed).standard_normal((12, 12)) * scale / 12
        ref = oracles.expm(a)
        assert np.max(np.abs(expm(a) - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))

    def test_sparse_input_and_zero(self):
        a = sp.random(20, 20, density=0.1, random_state=1, format="csr")
        np.testing.assert_allclose(expm(a), oracles.expm(a.toarray()), atol=1e-13)
        assert np.array_equal(expm(sp.csr_matrix((5, 5))), np.eye(5))

    def test_antisymmetric_gives_orthogonal(self):
        a = np.random.default_rng(3).standard_normal((15, 15))
        u = expm(a - a.T)
        assert np.max(np.abs(u.T @ u - np.eye(15))) < 1e-12

    def test_translation_factorizes(self, gens5):
        # exp(-c S_mu) lifted equals the Kronecker product of one-axis exponentials
        c = (0.3, -0.2, 0.0, 0.7)
        u = build_finite_transform(gens5, PoincareParams(c)).U.toarray()
        s = oracles.delta_sharp(5)
        ref = np.ones((1, 1))
        for mu in range(4):
            ref = np.kron(ref, oracles.expm(-c[mu] * s))
        assert np.max(np.abs(u - ref)) < 1e-13


class TestFiniteTransforms:
    def test_exponent_is_real_antisymmetric(self, gens5):
        p = PoincareParams.from_upper((0.1, 0.2, 0.3, 0.4), (0.1, 0.2, 0.3, 0.4, 0.5, 0.6))
        x = transform_exponent(gens5, p)
        assert x.is_real
        assert max_norm(x + x.T) < 1e-14

    def test_identity_exact(self, gens5):
        assert identity_defect(build_finite_transform(gens5, PoincareParams())) == 0.0

    def test_group_inverse(self, gens5):
        p = PoincareParams.from_upper((0.1, 0.2, 0.0, 0.05), (0.05, 0, 0.05, 0.05, 0, 0.05))
        assert group_inverse_defect(gens5, p) < 1e-12

    def test_orthogonality(self, gens5):
        t = build_finite_transform(gens5, PoincareParams((0.5, -0.1, 0.2, 0.3)))
        assert t.orthogonality_defect < 1e-12

    def test_translation_invariance_of_kg(self, gens5):
        kg = assemble_kg_operator_4d(gens5.bases, 1.0)
        t = build_finite_transform(gens5, PoincareParams((0.1, 0.2, 0.0, 0.05)))
        res = check_kg_invariance_4d(kg, t, interior_test_vector(gens5.bases, 3), margin=3)
        assert res.passed and res.asserted and res.test == "kg4_invariance_translation"

    def test_general_transform_is_reported_not_asserted(self, gens5):
        kg = assemble_kg_operator_4d(gens5.bases, 1.0)
        p = PoincareParams.from_upper((0, 0, 0, 0), (0, 0, 0.05, 0, 0, 0))
        res = check_kg_invariance_4d(kg, build_finite_transform(gens5, p), interior_test_vector(gens5.bases, 3), 3)
        assert not res.asserted
        assert res.norm_full > res.norm_interior

    def test_test_vector_support(self):
        bases = (TruncatedBasis(4, 2),) * 4
        v = interior_test_vector(bases, 2).amplitudes
        assert v.shape == (5,) * 4
        assert not np.any(v[3:]) and not np.any(v[:, :, :, 3:])
        assert np.linalg.norm(v) == pytest.approx(1.0)

    def test_mismatched_vector(self, gens5):
        kg = assemble_kg_operator_4d(gens5.bases, 1.0)
        t = build_finite_transform(gens5, PoincareParams())
        with pytest.raises(DimensionMismatchError):
            check_kg_invariance_4d(kg, t, WaveFunction.zeros((TruncatedBasis(3),) * 4))


def _boost(axis, w=1.0):
    upper = [0.0] * 6
    upper[(2, 4, 5)[axis]] = w
    return PoincareParams.from_upper((0, 0, 0, 0), upper)


class TestFirstOrder3plus1:
    def test_boost_slope(self, mode1_trajectory):
        rep = check_boost_invariance_3plus1(mode1_trajectory, _boost(0))
        assert rep.passed and rep.slope >= 1.9
        assert all(g > 0 for g in rep.growth)

    def test_wrong_boost_sign_is_first_order(self, mode1_trajectory):
        good = check_boost_invariance_3plus1(mode1_trajectory, _boost(1))
        bad = check_boost_invariance_3plus1(mode1_trajectory, _boost(1), boost_sign=-1.0)
        assert not bad.passed
        assert bad.growth[0] > 100 * good.growth[0]

    def test_translations_and_rotations(self, mode1_trajectory):
        for p in (
            PoincareParams((0.3, 0.0, -0.2, 0.0)),
            PoincareParams((0.0, 0.0, 0.0, 1.0)),
            PoincareParams.from_upper((0, 0, 0, 0), (0, 0, 0, 1.0, 0, 0)),
            PoincareParams.from_upper((0, 0, 0, 0), (1.0, 0, 0, 0, 0, 0)),
        ):
            rep = check_boost_invariance_3plus1(mode1_trajectory, p)
            assert rep.slope >= 1.9, p

    def test_rotation_ratio_near_one(self, mode1_trajectory):
        ratio = rotation_residual_ratio(mode1_trajectory, PoincareParams.from_upper((0, 0, 0, 0), (0, 0, 0, 1.0, 0, 0)))
        assert abs(ratio - 1.0) < 1e-2

    def test_zero_params_trivial(self, mode1_trajectory):
        rep = check_boost_invariance_3plus1(mode1_trajectory, PoincareParams())
        assert rep.trivial and rep.passed

    def test_generator_shape(self, mode1_trajectory):
        g = first_order_generator(mode1_trajectory, _boost(2))
        assert g.shape == (len(mode1_trajectory.times) - 2, 343)

    def test_guards(self, mode1_trajectory):
        short = run_trajectory(initial_state((TruncatedBasis(6),) * 3, 1.0, "eigenmode", 1), 0.01, 5)
        with pytest.raises(ValueError):
            check_boost_invariance_3plus1(short, _boost(0))
        with pytest.raises(ValueError):
            check_boost_invariance_3plus1(mode1_trajectory, _boost(0), dt=0.02)
        tiny = run_trajectory(initial_state((TruncatedBasis(4),) * 3, 1.0, "eigenmode", 1), 0.01, 20)
        with pytest.raises(ValueError):
            check_boost_invariance_3plus1(tiny, _boost(0))


def test_null_vector_stays_null_under_translation():
    from phasecell.klein_gordon import kg_null_residual, sharp_squared_spectrum

    bases = (TruncatedBasis(3, 1),) * 4
    lam = sharp_squared_spectrum(bases[0])
    mass = np.sqrt(lam[-1] - lam[1] - 2 * lam[0])
    kg = assemble_kg_operator_4d(bases, mass)
    null = kg_null_residual(kg)
    assert null.near_spectrum
    u = build_finite_transform(build_generators(bases), PoincareParams((0.05, 0.0, 0.05, 0.05))).U.matrix
    phi = null.vector.flat()
    lhs = np.linalg.norm(kg.matrix @ (u @ phi))
    assert lhs <= np.linalg.norm(u, 2) * np.linalg.norm(kg.matrix @ phi) + 1e-8
