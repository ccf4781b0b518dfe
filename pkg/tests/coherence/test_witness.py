"""Tests for the raw K-site coherence witness."""

from functools import reduce
from typing import Any

import numpy as np
import pytest

from exciton_network.coherence.projection import ProjectedState, maximally_mixed, w_state
from exciton_network.coherence.witness import (
    BlochPairSet,
    single_excitation_amplitudes,
    witness_objective,
    witness_prefactor,
    witness_raw,
)


def _random_diagonal_state(n: int, rng: np.random.Generator) -> ProjectedState:
    p = rng.dirichlet(np.ones(n))
    return ProjectedState(n_sites=n, matrix=np.diag(p).astype(complex))


class TestPrefactor:
    def test_values(self, analytic_cases: dict[str, Any]) -> None:
        for case in analytic_cases["witness_prefactor"]:
            assert witness_prefactor(case["k"], case["n_sites"]) == pytest.approx(case["value"], rel=1e-15)

    def test_k_out_of_range(self) -> None:
        with pytest.raises(ValueError):
            witness_prefactor(8, 7)


class TestSingleExcitationAmplitudes:
    def test_matches_full_product_state(self, rng: np.random.Generator) -> None:
        """<j|Phi> equals the component of the tensor product with only site j excited."""
        params = BlochPairSet.random(4, rng)
        ground, excited = params.local_amplitudes()
        local = [np.array([ground[0, i], excited[0, i]]) for i in range(4)]
        full = reduce(np.kron, local)
        # site 0 is the most significant qubit
        expected = np.array([full[1 << (3 - j)] for j in range(4)])

        np.testing.assert_allclose(single_excitation_amplitudes(ground[0], excited[0]), expected, atol=1e-15)

    def test_local_pairs_orthonormal(self, rng: np.random.Generator) -> None:
        ground, excited = BlochPairSet.random(3, rng).local_amplitudes()
        for i in range(3):
            phi = np.array([ground[0, i], excited[0, i]])
            perp = np.array([ground[1, i], excited[1, i]])
            assert np.vdot(phi, phi).real == pytest.approx(1.0)
            assert abs(np.vdot(phi, perp)) < 1e-15


class TestWitnessRaw:
    def test_two_site_w_state_at_symmetric_point(self) -> None:
        assert witness_raw(w_state(2, 2), BlochPairSet.symmetric(2), 2) == pytest.approx(0.5, abs=1e-15)

    def test_sound_on_diagonal_states(self, rng: np.random.Generator) -> None:
        """States without coherences never give a positive value."""
        for _ in range(100):
            state = _random_diagonal_state(7, rng)
            for _ in range(50):
                params = BlochPairSet.random(7, rng)
                for k in (2, 3, 4):
                    assert witness_raw(state, params, k) <= 1e-12

    def test_maximally_mixed_not_positive(self, rng: np.random.Generator) -> None:
        for _ in range(50):
            assert witness_raw(maximally_mixed(5), BlochPairSet.random(5, rng), 2) <= 1e-12

    def test_size_mismatch(self) -> None:
        with pytest.raises(ValueError, match="sites"):
            witness_raw(w_state(2, 3), BlochPairSet.symmetric(4), 2)

    def test_folded_angles_give_same_value(self, rng: np.random.Generator) -> None:
        x = rng.uniform(-10.0, 10.0, size=10)
        state = w_state(3, 5).rotated(rng.uniform(0, 2 * np.pi, 5))
        raw_params = BlochPairSet(thetas=x[:5], phis=x[5:])
        folded = BlochPairSet.from_vector(x)

        assert np.all((folded.thetas >= 0) & (folded.thetas <= np.pi))
        assert witness_raw(state, folded, 3) == pytest.approx(witness_raw(state, raw_params, 3), abs=1e-12)

    def test_objective_is_negated_witness(self, rng: np.random.Generator) -> None:
        state = w_state(3, 4)
        params = BlochPairSet.random(4, rng)
        objective = witness_objective(state.matrix, witness_prefactor(3, 4))
        assert objective(params.to_vector()) == pytest.approx(-witness_raw(state, params, 3), abs=1e-15)

    def test_phase_rotation_absorbed_by_phis(self, rng: np.random.Generator) -> None:
        phases = rng.uniform(0, 2 * np.pi, 6)
        matrix = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        state = ProjectedState(n_sites=6, matrix=matrix @ matrix.conj().T / np.trace(matrix @ matrix.conj().T).real)
        params = BlochPairSet.random(6, rng)
        shifted = BlochPairSet(thetas=params.thetas, phis=params.phis + phases)

        for k in (2, 3, 5):
            assert witness_raw(state.rotated(phases), shifted, k) == pytest.approx(
                witness_raw(state, params, k), abs=1e-12
            )

    def test_matches_site_by_site_evaluation(self, rng: np.random.Generator) -> None:
        state = w_state(4, 6).rotated(rng.uniform(0, 2 * np.pi, 6))
        params = BlochPairSet.random(6, rng)
        ground, excited = params.local_amplitudes()

        def amplitudes(rows: list[int]) -> np.ndarray:
            return single_excitation_amplitudes(ground[rows, range(6)], excited[rows, range(6)])

        phi_1, phi_2 = amplitudes([0] * 6), amplitudes([1] * 6)
        coherence = abs(phi_1.conj() @ state.matrix @ phi_2)
        populations = 0.0
        for i in range(6):
            flip_1 = amplitudes([1 if j == i else 0 for j in range(6)])
            flip_2 = amplitudes([0 if j == i else 1 for j in range(6)])
            pop_1 = (flip_1.conj() @ state.matrix @ flip_1).real
            pop_2 = (flip_2.conj() @ state.matrix @ flip_2).real
            populations += np.sqrt(max(pop_1 * pop_2, 0.0))

        expected = coherence - witness_prefactor(3, 6) * populations
        assert witness_raw(state, params, 3) == pytest.approx(expected, abs=1e-12)
