"""Campaign orchestration: per-network pipeline, sweeps and persistence."""

from exciton_network.campaign.fractions import coherence_fractions
from exciton_network.campaign.runner import NetworkOutcome, run_campaign, simulate_network
from exciton_network.campaign.storage import RecordWriter, read_records, write_records
from exciton_network.campaign.sweep import SweepPoint, SweepResult, sweep_correlation

__all__ = [
    "NetworkOutcome",
    "RecordWriter",
    "SweepPoint",
    "SweepResult",
    "coherence_fractions",
    "read_records",
    "run_campaign",
    "simulate_network",
    "sweep_correlation",
    "write_records",
]
