"""K-site coherence witness evaluated on product-state pairs.

Each site carries an orthonormal pair

    |phi>      = cos(theta/2) |g> + e^{i phi} sin(theta/2) |e>
    |phi_perp> = -e^{-i phi} sin(theta/2) |g> + cos(theta/2) |e>

and the witness compares the coherence <Phi_1|rho|Phi_2> between the all-phi
and all-phi_perp product states with populations of the states in which a
single site is flipped. Only single-excitation amplitudes of the product
states enter, so everything is O(N^2).
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from exciton_network.coherence.projection import ProjectedState
from exciton_network.dynamics.basis import ComplexMatrix


def witness_prefactor(k: int, n_sites: int) -> float:
    """a_KN: 1/N for K = 2, otherwise 1/(N - K + 1)."""
    if not 2 <= k <= n_sites:
        raise ValueError(f"k must lie in [2, {n_sites}], got {k}")
    return 1.0 / n_sites if k == 2 else 1.0 / (n_sites - k + 1)


@dataclass(frozen=True)
class BlochPairSet:
    """Per-site Bloch angles defining the local orthonormal pairs."""

    thetas: NDArray[np.float64]
    phis: NDArray[np.float64]

    @property
    def n_sites(self) -> int:
        return int(self.thetas.shape[0])

    @classmethod
    def symmetric(cls, n_sites: int) -> "BlochPairSet":
        """All theta = pi/2, phi = 0."""
        return cls(thetas=np.full(n_sites, np.pi / 2), phis=np.zeros(n_sites))

    @classmethod
    def random(cls, n_sites: int, rng: np.random.Generator) -> "BlochPairSet":
        return cls(thetas=rng.uniform(0.0, np.pi, n_sites), phis=rng.uniform(0.0, 2 * np.pi, n_sites))

    @classmethod
    def from_vector(cls, x: NDArray[np.float64]) -> "BlochPairSet":
        """Unpack ``[thetas..., phis...]``, folding angles into their canonical ranges."""
        n = x.shape[0] // 2
        thetas = np.mod(x[:n], 2 * np.pi)
        phis = np.mod(x[n:], 2 * np.pi)
        # theta and 2pi - theta describe the same pair up to phases the witness ignores
        flip = thetas > np.pi
        thetas = np.where(flip, 2 * np.pi - thetas, thetas)
        phis = np.where(flip, np.mod(phis + np.pi, 2 * np.pi), phis)
        return cls(thetas=thetas, phis=phis)

    def to_vector(self) -> NDArray[np.float64]:
        return np.concatenate([self.thetas, self.phis])

    def local_amplitudes(self) -> tuple[ComplexMatrix, ComplexMatrix]:
        """(ground, excited) amplitudes of phi (row 0) and phi_perp (row 1), shape (2, N)."""
        c = np.cos(self.thetas / 2)
        s = np.sin(self.thetas / 2)
        phase = np.exp(1j * self.phis)
        ground = np.stack([c + 0j, -phase.conj() * s])
        excited = np.stack([phase * s, c + 0j])
        return ground, excited


def single_excitation_amplitudes(ground: ComplexMatrix, excited: ComplexMatrix) -> ComplexMatrix:
    """<j|Phi> = excited_j * prod_{k != j} ground_k along the last axis."""
    ones = np.ones(ground.shape[:-1] + (1,), dtype=ground.dtype)
    before = np.concatenate([ones, np.cumprod(ground[..., :-1], axis=-1)], axis=-1)
    after = np.concatenate([np.cumprod(ground[..., :0:-1], axis=-1)[..., ::-1], ones], axis=-1)
    return excited * before * after


def _witness_terms(matrix: ComplexMatrix, params: BlochPairSet) -> tuple[float, float]:
    ground, excited = params.local_amplitudes()
    n = params.n_sites
    # rows: Phi_1, Phi_2, then Phi_1 and Phi_2 with site i flipped
    flipped = np.eye(n, dtype=bool)
    grounds = np.concatenate(
        [ground, np.where(flipped, ground[1], ground[0]), np.where(flipped, ground[0], ground[1])]
    )
    exciteds = np.concatenate(
        [excited, np.where(flipped, excited[1], excited[0]), np.where(flipped, excited[0], excited[1])]
    )
    amplitudes = single_excitation_amplitudes(grounds, exciteds)
    bras = amplitudes.conj() @ matrix
    coherence = abs(bras[0] @ amplitudes[1])
    populations = np.einsum("ij,ij->i", bras[2:], amplitudes[2:]).real
    return float(coherence), float(np.sqrt(np.clip(populations[:n] * populations[n:], 0.0, None)).sum())


def witness_raw(rho: ProjectedState, params: BlochPairSet, k: int) -> float:
    """Unnormalized witness |<Phi_1|rho|Phi_2>| - a_KN sum_i sqrt(<Phi_1^i|rho|Phi_1^i><Phi_2^i|rho|Phi_2^i>)."""
    if params.n_sites != rho.n_sites:
        raise ValueError(f"params cover {params.n_sites} sites, state has {rho.n_sites}")
    coherence, populations = _witness_terms(rho.matrix, params)
    return coherence - witness_prefactor(k, rho.n_sites) * populations


def witness_objective(matrix: ComplexMatrix, prefactor: float) -> Callable[[NDArray[np.float64]], float]:
    """Negated witness as a function of the flat angle vector, for minimizers."""

    def objective(x: NDArray[np.float64]) -> float:
        n = x.shape[0] // 2
        params = BlochPairSet(thetas=x[:n], phis=x[n:])
        coherence, populations = _witness_terms(matrix, params)
        return -(coherence - prefactor * populations)

    return objective
