"""Campaign-scale fixtures shared by the acceptance tests.

Campaigns are expensive, so each one runs once per session and the tests
read its records.
"""

import os
import time
from dataclasses import dataclass
from pathlib import Path

import pytest

from exciton_network.campaign.runner import run_campaign
from exciton_network.network.rates import RateSet
from exciton_network.schemas.campaign import CampaignConfig
from exciton_network.schemas.record import NetworkRecord

WORKERS = os.cpu_count() or 1


@dataclass(frozen=True)
class TimedCampaign:
    records: list[NetworkRecord]
    seconds: float


def _run(path: Path, **fields: object) -> list[NetworkRecord]:
    cfg = CampaignConfig.model_validate({"output_path": path, "workers": WORKERS, **fields})
    return run_campaign(cfg)


@pytest.fixture(scope="session")
def correlation_records(tmp_path_factory: pytest.TempPathFactory) -> list[NetworkRecord]:
    """10^4 seven-site networks without witness evaluation."""
    path = tmp_path_factory.mktemp("correlation") / "records.csv"
    return _run(path, n_networks=10_000, skip_tau=True, master_seed=1)


@pytest.fixture(scope="session")
def smoke_campaign(tmp_path_factory: pytest.TempPathFactory) -> TimedCampaign:
    """2 x 10^3 networks with tau_K for every K at the reference rates, wall-clock timed."""
    path = tmp_path_factory.mktemp("smoke") / "records.csv"
    start = time.perf_counter()
    records = _run(path, n_networks=2_000, k_list=list(range(2, 8)), master_seed=2)
    return TimedCampaign(records=records, seconds=time.perf_counter() - start)


@pytest.fixture(scope="session")
def coherence_records(smoke_campaign: TimedCampaign) -> list[NetworkRecord]:
    return smoke_campaign.records


@pytest.fixture(scope="session")
def full_coherence_records(tmp_path_factory: pytest.TempPathFactory) -> list[NetworkRecord]:
    """2 x 10^4 networks with tau_3 at the reference rates."""
    path = tmp_path_factory.mktemp("full") / "records.csv"
    return _run(path, n_networks=20_000, k_list=[3], master_seed=3)


@pytest.fixture(scope="session")
def dephased_records(tmp_path_factory: pytest.TempPathFactory) -> list[NetworkRecord]:
    """2 x 10^3 networks with strong dephasing and tau_2, tau_3."""
    path = tmp_path_factory.mktemp("dephased") / "records.csv"
    return _run(path, n_networks=2_000, k_list=[2, 3], master_seed=2, rates=RateSet(gamma_deph=10.0))
