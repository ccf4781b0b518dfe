"""Single-excitation projection and W reference states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from exciton_network.dynamics.basis import ComplexMatrix
from exciton_network.dynamics.liouvillian import DensityMatrix
from exciton_network.errors import ZeroWeightError

WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class ProjectedState:
    """Renormalized N x N block of a density matrix on {|1>, ..., |N>}."""

    n_sites: int
    matrix: ComplexMatrix
    weight: float = 1.0

    def rotated(self, phases: np.ndarray) -> "ProjectedState":
        """Conjugate by diag(exp(i * phases))."""
        u = np.exp(1j * np.asarray(phases, dtype=np.float64))
        return ProjectedState(
            n_sites=self.n_sites,
            matrix=u[:, None] * self.matrix * u.conj()[None, :],
            weight=self.weight,
        )


def project_single_excitation(rho: DensityMatrix, floor: float = WEIGHT_FLOOR) -> ProjectedState:
    """P rho P / tr(rho P) restricted to the single-excitation block.

    Raises:
        ZeroWeightError: tr(rho P) <= ``floor``.
    """
    n = rho.n_sites
    block = rho.matrix[1 : n + 1, 1 : n + 1]
    weight = float(np.trace(block).real)
    if weight <= floor:
        raise ZeroWeightError(weight, floor)
    return ProjectedState(n_sites=n, matrix=block / weight, weight=weight)


def w_state(k: int, n_sites: int) -> ProjectedState:
    """|W_KN><W_KN| with |W_KN> = sum_{i<=K} |i> / sqrt(K)."""
    if not 2 <= k <= n_sites:
        raise ValueError(f"k must lie in [2, {n_sites}], got {k}")
    vector = np.zeros(n_sites, dtype=np.complex128)
    vector[:k] = 1.0 / np.sqrt(k)
    return ProjectedState(n_sites=n_sites, matrix=np.outer(vector, vector.conj()))


def maximally_mixed(n_sites: int) -> ProjectedState:
    """Identity / N on the single-excitation block."""
    return ProjectedState(n_sites=n_sites, matrix=np.eye(n_sites, dtype=np.complex128) / n_sites)
