"""Tests for the coherent transient and its time-weighted efficiency."""

import math
from collections.abc import Callable
from typing import Any

import numpy as np
import pytest
from scipy.integrate import quad, solve_ivp

from exciton_network.dynamics import transient
from exciton_network.dynamics.liouvillian import build_jump_operators, build_liouvillian
from exciton_network.dynamics.transient import (
    transient_efficiencies,
    transient_efficiency,
    transient_efficiency_open,
    transient_population,
    transient_populations,
)
from exciton_network.errors import TransientError
from exciton_network.network.geometry import NetworkGeometry
from exciton_network.network.hamiltonian import Hamiltonian, coupling_matrix
from exciton_network.network.rates import RateSet

T_REFERENCE = math.pi / 80


class TestTransientPopulation:
    def test_two_sites(self, two_site_hamiltonian: Hamiltonian) -> None:
        times = np.linspace(0.0, 3.0, 7)
        np.testing.assert_allclose(transient_populations(two_site_hamiltonian, times), np.sin(times) ** 2, atol=1e-14)

    def test_matches_schroedinger_integration(self, hamiltonian7: Hamiltonian) -> None:
        n = hamiltonian7.n_sites
        psi0 = np.zeros(n, dtype=complex)
        psi0[0] = 1.0
        times = [0.05, 0.2, 0.5]
        solution = solve_ivp(
            lambda _t, psi: -1j * (hamiltonian7.matrix @ psi),
            (0.0, 0.5),
            psi0,
            method="DOP853",
            t_eval=times,
            rtol=1e-12,
            atol=1e-12,
        )
        reference = np.abs(solution.y[-1]) ** 2
        np.testing.assert_allclose(transient_populations(hamiltonian7, times), reference, atol=1e-8)

    def test_starts_empty(self, hamiltonian7: Hamiltonian) -> None:
        assert transient_population(hamiltonian7, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_negative_time_rejected(self, hamiltonian7: Hamiltonian) -> None:
        with pytest.raises(ValueError):
            transient_populations(hamiltonian7, [-1.0])


class TestTransientEfficiency:
    def test_two_site_closed_form(self, two_site_hamiltonian: Hamiltonian, analytic_cases: dict[str, Any]) -> None:
        for case in analytic_cases["two_site_transient"]:
            assert transient_efficiency(two_site_hamiltonian, case["t_weight"]) == pytest.approx(case["e_t"], abs=1e-10)

    @pytest.mark.parametrize("t_weight", [T_REFERENCE, 0.3, 2.0, 50.0])
    def test_two_site_formula(self, two_site_hamiltonian: Hamiltonian, t_weight: float) -> None:
        expected = 2 * t_weight**2 / (1 + 4 * t_weight**2)
        assert transient_efficiency(two_site_hamiltonian, t_weight) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("index", range(5))
    def test_matches_quadrature(self, make_geometry: Callable[..., NetworkGeometry], index: int) -> None:
        h = coupling_matrix(make_geometry(7, index))
        reference, _ = quad(
            lambda t: transient_population(h, t) * math.exp(-t / T_REFERENCE) / T_REFERENCE,
            0.0,
            50 * T_REFERENCE,
            limit=10_000,
            epsabs=1e-13,
            epsrel=1e-12,
        )
        assert transient_efficiency(h, T_REFERENCE) == pytest.approx(reference, abs=1e-8)

    def test_in_unit_interval(self, make_geometry: Callable[..., NetworkGeometry]) -> None:
        for index in range(10):
            value = transient_efficiency(coupling_matrix(make_geometry(7, index)), T_REFERENCE)
            assert 0.0 <= value <= 1.0

    def test_invariant_under_interior_relabelling(self, geometry7: NetworkGeometry) -> None:
        permuted = geometry7.permuted([2, 4, 1, 5, 3])
        assert transient_efficiency(coupling_matrix(permuted), T_REFERENCE) == pytest.approx(
            transient_efficiency(coupling_matrix(geometry7), T_REFERENCE), abs=1e-12
        )

    def test_grid_agrees_with_scalar(self, hamiltonian7: Hamiltonian) -> None:
        grid = [T_REFERENCE, 2 * T_REFERENCE, 1.0]
        np.testing.assert_allclose(
            transient_efficiencies(hamiltonian7, grid),
            [transient_efficiency(hamiltonian7, t) for t in grid],
            rtol=1e-14,
        )

    @pytest.mark.parametrize("t_weight", [0.0, -1.0])
    def test_non_positive_weight_rejected(self, hamiltonian7: Hamiltonian, t_weight: float) -> None:
        with pytest.raises(ValueError, match="t_weight"):
            transient_efficiency(hamiltonian7, t_weight)

    def test_imaginary_residue_raises(self, hamiltonian7: Hamiltonian, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(transient, "_path_weights", lambda h: (np.array([0.0, 1.0]), np.array([1.0, 1.0j])))
        with pytest.raises(TransientError, match="imaginary part"):
            transient_efficiency(hamiltonian7, T_REFERENCE)


class TestOpenTransientEfficiency:
    def test_reduces_to_coherent_without_rates(self, hamiltonian7: Hamiltonian) -> None:
        liouvillian = build_liouvillian(hamiltonian7, [])
        assert transient_efficiency_open(liouvillian, T_REFERENCE) == pytest.approx(
            transient_efficiency(hamiltonian7, T_REFERENCE), abs=1e-10
        )

    def test_uniform_recombination_shortens_weight_time(self, hamiltonian7: Hamiltonian) -> None:
        """Site-independent decay multiplies p_N(t) by exp(-gamma_rec t)."""
        gamma_rec = 5.0
        rates = RateSet(gamma_in=0.0, gamma_out=0.0, gamma_rec=gamma_rec)
        liouvillian = build_liouvillian(hamiltonian7, build_jump_operators(rates, 7))
        effective = 1.0 / (1.0 / T_REFERENCE + gamma_rec)

        expected = effective / T_REFERENCE * transient_efficiency(hamiltonian7, effective)

        assert transient_efficiency_open(liouvillian, T_REFERENCE) == pytest.approx(expected, abs=1e-10)

    def test_requires_single_excitation_generator(self, hamiltonian7: Hamiltonian, reference_rates: RateSet) -> None:
        liouvillian = build_liouvillian(hamiltonian7, build_jump_operators(reference_rates, 7, 2), max_excitations=2)
        with pytest.raises(ValueError, match="excitation"):
            transient_efficiency_open(liouvillian, T_REFERENCE)
