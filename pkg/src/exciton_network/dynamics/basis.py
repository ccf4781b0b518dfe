"""Truncated excitation-number bases and site operators on them.

Basis states are sets of excited sites, ordered by excitation number and
then lexicographically: ``()``, ``(0,)``, ..., ``(N-1,)``, ``(0, 1)``, ...
With ``max_excitations=1`` index 0 is the global ground state and index
``j`` (1-based) is the excitation on site ``j``.

Raising operators are projected onto the truncated space: a raise that
would leave it is dropped.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations

import numpy as np
from numpy.typing import NDArray

ComplexMatrix = NDArray[np.complex128]


class ExcitationBasis:
    """The {0, ..., M}-excitation subspace of N two-level sites."""

    def __init__(self, n_sites: int, max_excitations: int = 1) -> None:
        if n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {n_sites}")
        if not 1 <= max_excitations <= n_sites:
            raise ValueError(f"max_excitations must lie in [1, {n_sites}], got {max_excitations}")
        self.n_sites = n_sites
        self.max_excitations = max_excitations
        self.states: list[tuple[int, ...]] = [
            state for m in range(max_excitations + 1) for state in combinations(range(n_sites), m)
        ]
        self._index = {state: i for i, state in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, state: tuple[int, ...]) -> int:
        return self._index[tuple(sorted(state))]

    def excitation_numbers(self) -> NDArray[np.int64]:
        return np.array([len(s) for s in self.states], dtype=np.int64)

    def lowering(self, site: int) -> ComplexMatrix:
        """sigma_site^- restricted to the basis."""
        op = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for col, state in enumerate(self.states):
            if site in state:
                target = tuple(s for s in state if s != site)
                op[self._index[target], col] = 1.0
        return op

    def raising(self, site: int) -> ComplexMatrix:
        """P sigma_site^+ P: raises that exceed max_excitations are dropped."""
        op = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for col, state in enumerate(self.states):
            if site not in state and len(state) < self.max_excitations:
                target = tuple(sorted((*state, site)))
                op[self._index[target], col] = 1.0
        return op

    def sigma_z(self, site: int) -> ComplexMatrix:
        """+1 where ``site`` is excited, -1 on every other basis state."""
        signs = [1.0 if site in state else -1.0 for state in self.states]
        return np.diag(np.asarray(signs, dtype=np.complex128))

    def number(self) -> ComplexMatrix:
        """Total excitation number operator."""
        return np.diag(self.excitation_numbers().astype(np.complex128))

    @cached_property
    def _hopping(self) -> dict[tuple[int, int], ComplexMatrix]:
        return {
            (i, j): self.raising(i) @ self.lowering(j)
            for i in range(self.n_sites)
            for j in range(self.n_sites)
            if i != j
        }

    def embed_hamiltonian(self, couplings: NDArray[np.float64]) -> ComplexMatrix:
        """sum_{i != j} H_ij sigma_i^+ sigma_j^-; annihilates the ground state."""
        if couplings.shape != (self.n_sites, self.n_sites):
            raise ValueError(f"couplings shape {couplings.shape} does not match n_sites={self.n_sites}")
        if self.max_excitations == 1:
            full = np.zeros((self.dim, self.dim), dtype=np.complex128)
            full[1:, 1:] = couplings
            return full
        full = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for (i, j), hop in self._hopping.items():
            full += couplings[i, j] * hop
        return full
