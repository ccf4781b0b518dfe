"""Lightweight in-process metrics registry.

A thread-safe dict of counters plus a snapshot that the campaign runner
writes into its metadata file.

Usage:
    from exciton_network.core.metrics import metrics
    metrics.incr(NETWORKS_FAILED)
    snapshot = metrics.snapshot()
"""

from __future__ import annotations

import threading


class _Metrics:
    """Process-local counter registry.

    Counters are NOT shared across worker processes. The campaign runner
    increments them in the parent as records arrive, so the parent's view
    covers the whole campaign.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._counters: dict[str, int] = {}

    def incr(self, name: str, amount: int = 1) -> None:
        with self._lock:
            self._counters[name] = self._counters.get(name, 0) + amount

    def get(self, name: str) -> int:
        with self._lock:
            return self._counters.get(name, 0)

    def snapshot(self) -> dict[str, int]:
        with self._lock:
            return dict(self._counters)

    def reset(self) -> None:
        """Clear all counters (start of a campaign, tests)."""
        with self._lock:
            self._counters.clear()


metrics = _Metrics()


# Known metric names
NETWORKS_COMPLETED = "networks_completed"
NETWORKS_FAILED = "networks_failed"
GEOMETRY_RESAMPLES = "geometry_resamples"
TAU_NOT_CONVERGED = "tau_not_converged"
TAU_ORDER_EXCEPTIONS = "tau_order_exceptions"
