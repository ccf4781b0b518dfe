"""Ensemble statistics over campaign records."""

from exciton_network.analysis.binning import (
    EfficiencyBin,
    bin_by_efficiency,
    bin_fraction_above,
    binned_tau_table,
)
from exciton_network.analysis.stats import (
    BinStats,
    bin_stats,
    empty_bin_stats,
    is_monotone_increasing,
    pearson,
)

__all__ = [
    "BinStats",
    "EfficiencyBin",
    "bin_by_efficiency",
    "bin_fraction_above",
    "bin_stats",
    "binned_tau_table",
    "empty_bin_stats",
    "is_monotone_increasing",
    "pearson",
]
