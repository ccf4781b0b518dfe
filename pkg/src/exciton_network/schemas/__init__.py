"""Pydantic schemas for campaign configuration and per-network records."""

from exciton_network.schemas.campaign import CampaignConfig, TransientMode
from exciton_network.schemas.record import NetworkRecord

__all__ = ["CampaignConfig", "NetworkRecord", "TransientMode"]
