import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from phasecell.errors import DimensionMismatchError, MemoryBudgetError, StabilityError
from phasecell.klein_gordon import (
    ETA,
    KGState,
    assemble_kg_operator_4d,
    assemble_spatial_kg_generator,
    check_uniform,
    eigenmodes,
    energy,
    evolve_leapfrog,
    history_from_function,
    initial_state,
    kg_null_residual,
    kg_residual_3plus1,
    power_iteration_radius,
    run_trajectory,
    sharp_squared_spectrum,
    stability_limit,
    tensor_sum_spectrum,
    trajectory_rows,
)
from phasecell.lattice_ops import TruncatedBasis, WaveFunction

B6 = (TruncatedBasis(6),) * 3


def test_metric():
    assert np.array_equal(ETA.lower, np.diag([1.0, 1.0, 1.0, -1.0]))
    assert ETA[3] == -1.0


class TestOperators:
    @pytest.mark.parametrize("n_max", [3, 4])
    def test_4d_matches_dense_oracle(self, n_max):
        op = assemble_kg_operator_4d((TruncatedBasis(n_max),) * 4, 0.7)
        np.testing.assert_allclose(op.operator.toarray(), oracles.kg4_dense(n_max, 0.7), atol=1e-12)
        assert op.dim == (n_max + 1) ** 4

    def test_4d_requires_n_max_3(self):
        with pytest.raises(ValueError):
            assemble_kg_operator_4d((TruncatedBasis(2),) * 4, 1.0)

    def test_4d_budget(self):
        with pytest.raises(MemoryBudgetError):
            assemble_kg_operator_4d((TruncatedBasis(20),) * 4, 1.0)

    def test_4d_needs_four_axes(self):
        with pytest.raises(DimensionMismatchError):
            assemble_kg_operator_4d((TruncatedBasis(4),) * 3, 1.0)

    def test_sharp_squared_spectrum_oracle(self):
        s = oracles.delta_sharp(7)
        np.testing.assert_allclose(
            sharp_squared_spectrum(TruncatedBasis(7)), np.sort(np.linalg.eigvalsh(-(s @ s))), atol=1e-12
        )

    @pytest.mark.parametrize("mass", [0.0, 1.0, 2.5])
    def test_tensor_sum_oracle_with_mass_shift(self, mass):
        op = assemble_kg_operator_4d((TruncatedBasis(3),) * 4, mass)
        vals = np.linalg.eigvalsh(op.operator.toarray())
        np.testing.assert_allclose(np.sort(vals), tensor_sum_spectrum(op.bases, mass), atol=1e-10)

    def test_mixed_axis_sizes(self):
        bases = (TruncatedBasis(3), TruncatedBasis(4), TruncatedBasis(3), TruncatedBasis(5))
        op = assemble_kg_operator_4d(bases, 1.0)
        vals = np.linalg.eigvalsh(op.operator.toarray())
        np.testing.assert_allclose(np.sort(vals), tensor_sum_spectrum(bases, 1.0), atol=1e-10)

    def test_null_residual(self):
        bases = (TruncatedBasis(3),) * 4
        lam = sharp_squared_spectrum(bases[0])
        # m^2 chosen on the spectrum: time-axis eigenvalue minus one spatial one
        m2 = lam[-1] - lam[1] - 2 * lam[0]
        res = kg_null_residual(assemble_kg_operator_4d(bases, np.sqrt(m2)))
        assert res.near_spectrum and res.min_singular_value < 1e-8
        op = assemble_kg_operator_4d(bases, np.sqrt(m2))
        assert np.linalg.norm(op.matrix @ res.vector.flat()) < 1e-8
        off = kg_null_residual(assemble_kg_operator_4d(bases, 0.123456))
        assert off.min_singular_value > 0

    def test_spatial_generator_oracle_and_definiteness(self):
        k = assemble_spatial_kg_generator((TruncatedBasis(3),) * 3, 1.0).toarray()
        np.testing.assert_allclose(k, oracles.spatial_generator(3, 1.0), atol=1e-12)
        assert np.max(np.linalg.eigvalsh(k)) <= -1.0 + 1e-12


class TestEvolution:
    def test_eigenmode_cosine(self):
        omega, _ = eigenmodes(B6, 1.0)
        assert omega[0] == pytest.approx(1.0)
        s = initial_state(B6, 1.0, "eigenmode", 0)
        traj = run_trajectory(s, 0.01, 1000)
        ref = np.cos(traj.times)[:, None] * s.phi.flat()[None, :]
        assert np.max(np.abs(traj.phis - ref)) < 1e-4

    def test_leapfrog_discrete_dispersion(self):
        # the scheme reproduces cos(n theta) with cos(theta) = 1 - (omega dt)^2 / 2
        omega, _ = eigenmodes(B6, 1.0)
        s = initial_state(B6, 1.0, "eigenmode", 5)
        dt = 0.3 / omega[5]
        traj = run_trajectory(s, dt, 200)
        theta = np.arccos(1 - 0.5 * (omega[5] * dt) ** 2)
        ref = np.cos(theta * np.arange(201))[:, None] * s.phi.flat()[None, :]
        assert np.max(np.abs(traj.phis - ref)) < 1e-12

    @pytest.mark.parametrize("kind", ["eigenmode", "gaussian", "random"])
    def test_staggered_energy_conserved(self, kind):
        s = initial_state(B6, 1.0, kind, mode=3, seed=4)
        traj = run_trajectory(s, 0.05, 1000)
        es = traj.staggered_energies()
        assert (es.max() - es.min()) / abs(es[0]) < 1e-6
        # the instantaneous energy only oscillates at O((omega dt)^2)
        e = traj.energies()
        assert abs(e[0] - energy(s)) < 1e-15
        assert (e.max() - e.min()) / e[0] < 0.5 * (4.8 * 0.05) ** 2

    def test_time_reversal(self):
        s = initial_state(B6, 1.0, "random", seed=2)
        fwd = evolve_leapfrog(s, 0.02, 1000)
        back = evolve_leapfrog(fwd, -0.02, 1000)
        assert np.max(np.abs(back.phi.flat() - s.phi.flat())) < 1e-10
        assert back.t == pytest.approx(0.0, abs=1e-12)

    def test_zero_data_stays_zero(self):
        traj = run_trajectory(initial_state(B6, 1.0, "zero"), 0.01, 50)
        assert not np.any(traj.phis)

    def test_evolve_matches_trajectory(self):
        s = initial_state(B6, 1.0, "gaussian")
        a = evolve_leapfrog(s, 0.01, 30)
        b = run_trajectory(s, 0.01, 30).final_state
        np.testing.assert_array_equal(a.phi.flat(), b.phi.flat())

    def test_stability(self):
        limit = stability_limit(B6, 1.0)
        omega, _ = eigenmodes(B6, 1.0)
        assert limit < 2.0 / omega[-1]
        assert limit > 0.98 * 2.0 / omega[-1]
        with pytest.raises(StabilityError) as exc:
            evolve_leapfrog(initial_state(B6, 1.0), 1.0, 10)
        assert 0 < exc.value.suggested_dt < limit
        evolve_leapfrog(initial_state(B6, 1.0), exc.value.suggested_dt, 5)

    def test_power_iteration(self):
        k = assemble_spatial_kg_generator(B6, 1.0).matrix
        omega, _ = eigenmodes(B6, 1.0)
        assert power_iteration_radius(-k) == pytest.approx(omega[-1] ** 2, rel=1e-6)

    def test_residual_of_leapfrog_is_rounding(self):
        traj = run_trajectory(initial_state(B6, 1.0, "random"), 0.05, 100)
        assert kg_residual_3plus1(traj) < 1e-9

    def test_residual_of_exact_continuum_solution(self):
        omega, vecs = eigenmodes(B6, 1.0)
        v = vecs[:, 2]
        t = np.arange(0, 2, 0.01)
        traj = history_from_function(B6, 1.0, t, lambda s: (np.cos(omega[2] * s) * v, -omega[2] * np.sin(omega[2] * s) * v))
        # central second difference error ~ omega^4 dt^2 / 12
        assert kg_residual_3plus1(traj) < omega[2] ** 4 * 1e-4 / 12 * 1.01

    def test_check_uniform(self):
        traj = history_from_function(B6, 1.0, [0, 0.1, 0.3], lambda s: (np.zeros(343), np.zeros(343)))
        with pytest.raises(ValueError):
            check_uniform(traj)

    def test_state_validation(self):
        b = TruncatedBasis(3)
        with pytest.raises(DimensionMismatchError):
            KGState(WaveFunction.zeros((b, b)), WaveFunction.zeros((b, b)))
        with pytest.raises(ValueError):
            initial_state(B6, 1.0, "sawtooth")
        with pytest.raises(ValueError):
            initial_state(B6, 1.0, "eigenmode", mode=343)

    def test_trajectory_rows(self):
        traj = run_trajectory(initial_state((TruncatedBasis(2),) * 3, 1.0, "gaussian"), 0.01, 10)
        rows = list(trajectory_rows(traj, stride=5))
        assert len(rows) == 3 * 27
        assert rows[0][:4] == (0.0, 0, 0, 0)
        assert rows[1][1:4] == (0, 0, 1)

    @given(st.floats(0.0, 3.0), st.integers(0, 1000))
    @settings(max_examples=10, deadline=None)
    def test_linearity_of_evolution(self, alpha, seed):
        b = (TruncatedBasis(3),) * 3
        u = initial_state(b, 1.0, "random", seed=seed)
        w = initial_state(b, 1.0, "random", seed=seed + 1)
        combo = KGState(u.phi * alpha + w.phi, u.phi_dot, 0.0, 1.0)
        lhs = evolve_leapfrog(combo, 0.05, 40).phi.flat()
        rhs = alpha * evolve_leapfrog(u, 0.05, 40).phi.flat() + evolve_leapfrog(w, 0.05, 40).phi.flat()
        np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (1 + alpha))


def test_one_axis_slice_matches_sharp_squared():
    b = TruncatedBasis(6)
    k = assemble_spatial_kg_generator((b,) * 3, 1.0)
    f = np.random.default_rng(0).standard_normal(7)
    amp = np.zeros((7, 7, 7))
    amp[:, 0, 0] = f
    out = (k @ WaveFunction((b,) * 3, amp)).amplitudes.real
    s = oracles.delta_sharp(6)
    # each frozen axis adds (S^2)[0, 0] = -1/2; the mass term adds -1
    np.testing.assert_allclose(out[:, 0, 0], s @ s @ f - 0.5 * f - 0.5 * f - f, atol=1e-12)
