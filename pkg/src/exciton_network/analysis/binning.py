"""Fixed-width binning of records by stationary efficiency."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace

import numpy as np

from exciton_network.analysis.stats import BinStats, bin_stats, empty_bin_stats
from exciton_network.errors import StatisticsError
from exciton_network.schemas.record import NetworkRecord

# Records whose E_s sits on a bin edge within this (relative to the width) go to the upper bin.
_EDGE_TOL = 1e-9


@dataclass(frozen=True)
class EfficiencyBin:
    """Records with lower <= E_s < upper (the top bin also holds E_s == upper)."""

    lower: float
    upper: float
    records: tuple[NetworkRecord, ...]

    @property
    def center(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def n(self) -> int:
        return len(self.records)

    def tau_values(self, k: int) -> list[float]:
        """Finite tau_K values of the bin's records."""
        return [r.tau[k] for r in self.records if k in r.tau and math.isfinite(r.tau[k])]


def bin_by_efficiency(
    records: Iterable[NetworkRecord],
    width: float,
    min_bin_count: int = 1,
) -> list[EfficiencyBin]:
    """Partition records into fixed-width E_s bins, dropping empty ones.

    Bins above the last one holding at least ``min_bin_count`` records are
    merged into a single wider top bin. Records with NaN E_s are skipped.

    Raises:
        StatisticsError: no record has a finite E_s, or ``width`` is not positive.
    """
    if width <= 0:
        raise StatisticsError(f"bin width must be positive, got {width}")
    usable = [r for r in records if math.isfinite(r.e_s)]
    if not usable:
        raise StatisticsError("no records with a finite stationary efficiency to bin")

    e_s = np.array([r.e_s for r in usable])
    lo = math.floor(float(e_s.min()) / width) * width
    n_bins = max(1, math.ceil((float(e_s.max()) - lo) / width - _EDGE_TOL))
    index = np.floor((e_s - lo) / width + _EDGE_TOL).astype(int)
    index = np.clip(index, 0, n_bins - 1)

    grouped: dict[int, list[NetworkRecord]] = {}
    for i, record in zip(index.tolist(), usable, strict=True):
        grouped.setdefault(i, []).append(record)

    bins = [
        EfficiencyBin(lower=lo + i * width, upper=lo + (i + 1) * width, records=tuple(grouped[i]))
        for i in sorted(grouped)
    ]
    return _merge_sparse_tail(bins, min_bin_count)


def _merge_sparse_tail(bins: list[EfficiencyBin], min_bin_count: int) -> list[EfficiencyBin]:
    populated = [i for i, b in enumerate(bins) if b.n >= min_bin_count]
    cut = populated[-1] + 1 if populated else 0
    if cut >= len(bins) - 1:
        return bins
    tail = bins[cut:]
    merged = EfficiencyBin(
        lower=tail[0].lower,
        upper=tail[-1].upper,
        records=tuple(r for b in tail for r in b.records),
    )
    return [*bins[:cut], merged]


def binned_tau_table(
    records: Iterable[NetworkRecord],
    k_list: Sequence[int],
    width: float,
    min_bin_count: int = 1,
) -> dict[int, list[BinStats]]:
    """Per-K statistics of tau for each E_s bin, bins in ascending E_s order.

    Bins with fewer than two finite tau values get an ``insufficient_n`` row.
    """
    bins = bin_by_efficiency(records, width, min_bin_count)
    table: dict[int, list[BinStats]] = {}
    for k in k_list:
        rows = []
        for b in bins:
            values = b.tau_values(k)
            stats = bin_stats(values) if len(values) >= 2 else empty_bin_stats(len(values))
            rows.append(replace(stats, center=b.center, width=b.width))
        table[k] = rows
    return table


def bin_fraction_above(efficiency_bin: EfficiencyBin, k: int, threshold: float) -> float:
    """Share of the bin's finite tau_K values strictly above ``threshold``."""
    values = efficiency_bin.tau_values(k)
    if not values:
        return math.nan
    return float(np.mean(np.asarray(values) > threshold))
