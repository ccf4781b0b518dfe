"""Random network geometries and their dipolar Hamiltonians."""

from exciton_network.network.geometry import (
    DEFAULT_MIN_SEPARATION,
    NetworkGeometry,
    load_geometry,
    sample_geometry,
    save_geometry,
)
from exciton_network.network.hamiltonian import (
    Hamiltonian,
    coupling_matrix,
    coupling_rate_from_wavenumber,
    direct_transfer_time,
    physical_time,
    scaled_time,
)
from exciton_network.network.rates import RateSet
from exciton_network.network.seeding import mix_seed, splitmix64

__all__ = [
    "DEFAULT_MIN_SEPARATION",
    "Hamiltonian",
    "NetworkGeometry",
    "RateSet",
    "coupling_matrix",
    "coupling_rate_from_wavenumber",
    "direct_transfer_time",
    "load_geometry",
    "mix_seed",
    "physical_time",
    "sample_geometry",
    "save_geometry",
    "scaled_time",
    "splitmix64",
]
