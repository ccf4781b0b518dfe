"""Lindblad generator of the driven network on a truncated excitation space.

Vectorization is row-major: ``vec(rho)[i * d + j] = rho[i, j]``, hence
``vec(A rho B) = kron(A, B.T) @ vec(rho)``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from exciton_network.dynamics.basis import ComplexMatrix, ExcitationBasis
from exciton_network.errors import DimensionMismatchError
from exciton_network.network.hamiltonian import Hamiltonian
from exciton_network.network.rates import RateSet


@dataclass(frozen=True)
class JumpOperator:
    """A collapse operator already weighted by the square root of its rate."""

    label: str
    rate: float
    matrix: ComplexMatrix


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix on an :class:`ExcitationBasis` (index 0 = ground state)."""

    n_sites: int
    matrix: ComplexMatrix
    max_excitations: int = 1

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def population(self, index: int) -> float:
        return float(self.matrix[index, index].real)

    def violations(
        self,
        hermitian_tol: float = 1e-12,
        trace_tol: float = 1e-12,
        eigenvalue_floor: float = -1e-10,
    ) -> list[str]:
        """Names of the physicality checks this matrix fails (empty when valid)."""
        problems: list[str] = []
        if np.max(np.abs(self.matrix - self.matrix.conj().T)) > hermitian_tol:
            problems.append("not_hermitian")
        if abs(np.trace(self.matrix) - 1.0) > trace_tol:
            problems.append("trace")
        hermitian_part = 0.5 * (self.matrix + self.matrix.conj().T)
        if np.linalg.eigvalsh(hermitian_part).min() < eigenvalue_floor:
            problems.append("negative_eigenvalue")
        return problems


@dataclass(frozen=True)
class Liouvillian:
    """Superoperator matrix acting on row-major vectorized density matrices."""

    n_sites: int
    hilbert_dim: int
    matrix: ComplexMatrix
    jump_ops: tuple[JumpOperator, ...] = field(default_factory=tuple)
    max_excitations: int = 1

    @property
    def dim(self) -> int:
        return self.hilbert_dim**2

    def apply(self, rho: ComplexMatrix) -> ComplexMatrix:
        """L(rho) as a matrix."""
        d = self.hilbert_dim
        return (self.matrix @ rho.reshape(d * d)).reshape(d, d)


def build_jump_operators(
    rates: RateSet,
    n_sites: int,
    max_excitations: int = 1,
) -> list[JumpOperator]:
    """Collapse operators for injection, recombination, sink and dephasing.

    Channels with a zero rate are omitted. Injection acts on site 1 (both
    emission to and absorption from the light field), the sink on site N,
    recombination and dephasing on every site.
    """
    basis = ExcitationBasis(n_sites, max_excitations)
    ops: list[JumpOperator] = []

    def add(label: str, rate: float, matrix: ComplexMatrix) -> None:
        if rate > 0:
            ops.append(JumpOperator(label=label, rate=rate, matrix=np.sqrt(rate) * matrix))

    add("in_emit", rates.gamma_in, basis.lowering(0))
    add("in_absorb", rates.gamma_in, basis.raising(0))
    for site in range(n_sites):
        add(f"rec_{site + 1}", rates.gamma_rec, basis.lowering(site))
    add("out", rates.gamma_out, basis.lowering(n_sites - 1))
    for site in range(n_sites):
        add(f"deph_{site + 1}", rates.gamma_deph, basis.sigma_z(site))
    return ops


def build_liouvillian(
    h: Hamiltonian,
    jumps: Sequence[JumpOperator],
    max_excitations: int = 1,
) -> Liouvillian:
    """Matrix of rho -> -i[H, rho] + sum_k (L rho L^+ - {L^+ L, rho} / 2).

    Raises:
        DimensionMismatchError: a jump operator does not live on the basis of ``h``.
    """
    basis = ExcitationBasis(h.n_sites, max_excitations)
    d = basis.dim
    for jump in jumps:
        if jump.matrix.shape != (d, d):
            raise DimensionMismatchError(
                f"jump operator {jump.label!r} has shape {jump.matrix.shape}, expected {(d, d)}"
            )

    identity = np.eye(d, dtype=np.complex128)
    h_full = basis.embed_hamiltonian(h.matrix)
    generator = -1j * (np.kron(h_full, identity) - np.kron(identity, h_full.T))
    for jump in jumps:
        op = jump.matrix
        decay = op.conj().T @ op
        generator += np.kron(op, op.conj())
        generator -= 0.5 * (np.kron(decay, identity) + np.kron(identity, decay.T))

    return Liouvillian(
        n_sites=h.n_sites,
        hilbert_dim=d,
        matrix=generator,
        jump_ops=tuple(jumps),
        max_excitations=max_excitations,
    )


def ground_state(n_sites: int, max_excitations: int = 1) -> DensityMatrix:
    """|0><0| on the truncated basis."""
    d = ExcitationBasis(n_sites, max_excitations).dim
    matrix = np.zeros((d, d), dtype=np.complex128)
    matrix[0, 0] = 1.0
    return DensityMatrix(n_sites=n_sites, matrix=matrix, max_excitations=max_excitations)


def site_state(n_sites: int, site: int) -> DensityMatrix:
    """|site><site| for a 1-based site label on the {0,1}-excitation basis."""
    if not 1 <= site <= n_sites:
        raise ValueError(f"site must lie in [1, {n_sites}], got {site}")
    matrix = np.zeros((n_sites + 1, n_sites + 1), dtype=np.complex128)
    matrix[site, site] = 1.0
    return DensityMatrix(n_sites=n_sites, matrix=matrix)


def evolve(liouvillian: Liouvillian, rho0: ComplexMatrix, t_final: float, dt: float) -> ComplexMatrix:
    """Fixed-step RK4 integration of d vec(rho)/dt = L vec(rho).

    Used as a time-stepping reference for stationary solves. ``t_final = 0``
    returns a copy of ``rho0``.
    """
    if t_final < 0 or dt <= 0:
        raise ValueError(f"need t_final >= 0 and dt > 0, got t_final={t_final}, dt={dt}")
    if t_final == 0:
        return rho0.astype(np.complex128, copy=True)
    steps = int(np.ceil(t_final / dt))
    dt = t_final / steps
    generator = liouvillian.matrix
    state = rho0.reshape(-1).astype(np.complex128)
    for _ in range(steps):
        k1 = generator @ state
        k2 = generator @ (state + 0.5 * dt * k1)
        k3 = generator @ (state + 0.5 * dt * k2)
        k4 = generator @ (state + dt * k3)
        state = state + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    d = liouvillian.hilbert_dim
    return state.reshape(d, d)


def matrix_to_pairs(matrix: NDArray[np.complexfloating]) -> list[list[list[float]]]:
    """Nested ``[re, im]`` pairs for JSON export."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def pairs_to_matrix(pairs: Sequence[Sequence[Sequence[float]]]) -> ComplexMatrix:
    """Inverse of :func:`matrix_to_pairs`."""
    array = np.asarray(pairs, dtype=np.float64)
    return array[..., 0] + 1j * array[..., 1]
