"""Application configuration using pydantic-settings."""

import logging
import os
from functools import lru_cache
from pathlib import Path

from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Process settings loaded from environment variables (prefix ``EXCITON_``)."""

    model_config = SettingsConfigDict(
        env_prefix="EXCITON_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Logging
    log_level: str = "INFO"

    # Execution
    workers: int = 1
    output_dir: Path = Path("runs")
    max_failure_fraction: float = 0.01

    # Witness
    witness_restarts: int = 8
    b_cache_path: Path | None = None  # JSON file with calibrated b_KN values

    @model_validator(mode="after")
    def _warn_questionable_defaults(self) -> "Settings":
        """Log warnings for settings that are legal but probably unintended."""
        cpus = os.cpu_count() or 1
        if self.workers > cpus:
            logger.warning(
                "workers=%d exceeds the %d available CPUs; processes will oversubscribe.",
                self.workers,
                cpus,
            )
        if self.max_failure_fraction > 0.05:
            logger.warning(
                "max_failure_fraction=%.3f tolerates many failed networks; ensemble statistics may be biased.",
                self.max_failure_fraction,
            )
        return self


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
