"""Shares of coherent networks among low- and high-efficiency networks."""

from __future__ import annotations

import math
from collections.abc import Iterable

from exciton_network.errors import StatisticsError
from exciton_network.schemas.record import NetworkRecord

HIGH_EFFICIENCY_CUT = 0.15


def coherence_fractions(
    records: Iterable[NetworkRecord],
    k: int,
    threshold: float,
    e_s_cut: float,
    high_cut: float = HIGH_EFFICIENCY_CUT,
) -> tuple[float, float]:
    """Fraction with tau_K >= ``threshold`` among E_s <= ``e_s_cut`` and E_s >= ``high_cut``.

    Records without a finite E_s or tau_K are left out of both partitions.

    Raises:
        StatisticsError: either partition is empty.
    """
    low: list[bool] = []
    high: list[bool] = []
    for record in records:
        value = record.tau.get(k, math.nan)
        if math.isnan(value) or not math.isfinite(record.e_s):
            continue
        if record.e_s <= e_s_cut:
            low.append(value >= threshold)
        if record.e_s >= high_cut:
            high.append(value >= threshold)
    if not low:
        raise StatisticsError(f"no records with E_s <= {e_s_cut} and a tau{k} value")
    if not high:
        raise StatisticsError(f"no records with E_s >= {high_cut} and a tau{k} value")
    return sum(low) / len(low), sum(high) / len(high)
