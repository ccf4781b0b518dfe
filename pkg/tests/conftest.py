"""Pytest configuration and fixtures."""

import json
from collections.abc import Callable, Generator
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from exciton_network.coherence.optimizer import WitnessConfig
from exciton_network.config import get_settings
from exciton_network.core.metrics import metrics
from exciton_network.network.geometry import NetworkGeometry, sample_geometry
from exciton_network.network.hamiltonian import Hamiltonian, coupling_matrix
from exciton_network.network.rates import RateSet
from exciton_network.network.seeding import mix_seed
from exciton_network.schemas.campaign import CampaignConfig

FIXTURES = Path(__file__).parent / "fixtures"

# Keeps couplings (1/r^3) at most 125 so ODE and quadrature references stay cheap.
WELL_SEPARATED = 0.2


@pytest.fixture(autouse=True)
def _isolated_state(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> Generator[None, None, None]:
    """Fresh settings and counters for every test."""
    monkeypatch.setenv("EXCITON_OUTPUT_DIR", str(tmp_path / "runs"))
    monkeypatch.delenv("EXCITON_B_CACHE_PATH", raising=False)
    get_settings.cache_clear()
    metrics.reset()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def analytic_cases() -> dict[str, Any]:
    """Hand-derived reference values."""
    data: dict[str, Any] = json.loads((FIXTURES / "analytic_cases.json").read_text())
    return data


@pytest.fixture
def reference_rates() -> RateSet:
    """gamma_in = 2e-4, gamma_out = gamma_rec = 20, no dephasing."""
    return RateSet()


@pytest.fixture
def moderate_rates() -> RateSet:
    """Rates of comparable size, for references that integrate to stationarity."""
    return RateSet(gamma_in=0.5, gamma_out=2.0, gamma_rec=1.0, gamma_deph=0.3)


def _well_separated(n_sites: int, index: int = 0) -> NetworkGeometry:
    return sample_geometry(n_sites, mix_seed(2024, index), WELL_SEPARATED)


@pytest.fixture
def make_geometry() -> Callable[..., NetworkGeometry]:
    """Factory for reproducible geometries with well-separated sites."""
    return _well_separated


@pytest.fixture
def geometry7() -> NetworkGeometry:
    return _well_separated(7)


@pytest.fixture
def hamiltonian7(geometry7: NetworkGeometry) -> Hamiltonian:
    return coupling_matrix(geometry7)


@pytest.fixture
def two_site_hamiltonian() -> Hamiltonian:
    """Poles only: H = [[0, 1], [1, 0]]."""
    return coupling_matrix(sample_geometry(2, seed=0))


@pytest.fixture
def fast_witness() -> WitnessConfig:
    """Small optimizer budget for unit tests."""
    return WitnessConfig(restarts=3, max_iters=400, polish_rounds=1)


@pytest.fixture
def small_campaign(tmp_path: Path, fast_witness: WitnessConfig) -> CampaignConfig:
    """Four-site campaign that finishes in seconds."""
    return CampaignConfig(
        n_sites=4,
        n_networks=6,
        master_seed=7,
        k_list=[2, 3],
        witness=fast_witness,
        output_path=tmp_path / "records.csv",
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
