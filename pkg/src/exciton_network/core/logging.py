"""Structured JSON logging with campaign and network context.

Every line carries the campaign id and the worker process. Lines emitted
while a network is being simulated also carry its index and seed, so a
failure in a worker can be replayed from the log alone.
"""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Any

from pythonjsonlogger.json import JsonFormatter


@dataclass(frozen=True)
class NetworkContext:
    index: int
    seed: int


campaign_id_var: ContextVar[str | None] = ContextVar("campaign_id", default=None)
network_var: ContextVar[NetworkContext | None] = ContextVar("network", default=None)


@contextmanager
def network_context(index: int, seed: int, campaign_id: str | None = None) -> Iterator[NetworkContext]:
    """Tag log lines inside the block with one network (and campaign, in workers)."""
    context = NetworkContext(index=index, seed=seed)
    network_token = network_var.set(context)
    campaign_token = campaign_id_var.set(campaign_id) if campaign_id is not None else None
    try:
        yield context
    finally:
        network_var.reset(network_token)
        if campaign_token is not None:
            campaign_id_var.reset(campaign_token)


class CampaignContextFilter(logging.Filter):
    """Copy the campaign and network context onto each record."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.campaign_id = campaign_id_var.get() or "-"
        network = network_var.get()
        if network is not None:
            record.network_index = network.index
            record.network_seed = network.seed
        return True


class CampaignJsonFormatter(JsonFormatter):
    """One JSON object per line: timestamp, level, logger, worker, message, campaign_id."""

    def __init__(self) -> None:
        super().__init__(
            fmt="%(asctime)s %(levelname)s %(name)s %(processName)s %(message)s %(campaign_id)s",
            rename_fields={
                "asctime": "timestamp",
                "levelname": "level",
                "processName": "worker",
            },
        )

    def add_fields(
        self,
        log_record: dict[str, Any],
        record: logging.LogRecord,
        message_dict: dict[str, Any],
    ) -> None:
        super().add_fields(log_record, record, message_dict)
        log_record.setdefault("campaign_id", getattr(record, "campaign_id", "-"))
        for field in ("network_index", "network_seed"):
            value = getattr(record, field, None)
            if value is not None:
                log_record.setdefault(field, value)


def setup_logging(log_level: int | str = logging.INFO) -> None:
    """Send JSON lines to stderr; stdout carries command output."""
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(CampaignJsonFormatter())
    stream_handler.addFilter(CampaignContextFilter())
    root_logger.addHandler(stream_handler)

    # joblib reports every dispatched batch at INFO
    logging.getLogger("joblib").setLevel(logging.WARNING)
