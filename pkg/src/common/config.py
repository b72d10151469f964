"""Configuration loader supporting .env files and environment overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from src.common.errors import ConfigError
from src.common.log import get_logger

LOGGER = get_logger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]
SAMPLE_DATA_DIR = PROJECT_ROOT / "docs" / "data"


@dataclass(slots=True)
class AppConfig:
    """Runtime configuration."""

    environment: str
    dry_run: bool
    sample_data_path: Path
    subset_cap: int
    lattice_cap: int
    support_cap: int
    product_cap: int
    joining_cap: int
    orbit_union_cap: int
    depth_cap: int
    default_window: int
    default_seed: int
    report_bucket: Optional[str]
    aws_region: str

    @property
    def report_prefix(self) -> str:
        return f"reports/{self.environment}"


def _read_env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).lower() in {"1", "true", "yes", "on"}


def _read_positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@lru_cache(maxsize=1)
def load_config(refresh: bool = False) -> AppConfig:
    """Load configuration with optional refresh."""
    if refresh:
        load_config.cache_clear()
    load_dotenv(PROJECT_ROOT / ".env", override=False)

    config = AppConfig(
        environment=os.getenv("APP_ENV", "dev"),
        dry_run=_read_env_flag("DRY_RUN", "true"),
        sample_data_path=SAMPLE_DATA_DIR,
        subset_cap=_read_positive_int("SUBSET_CAP", 2**20),
        lattice_cap=_read_positive_int("LATTICE_CAP", 2**20),
        support_cap=_read_positive_int("SUPPORT_CAP", 20),
        product_cap=_read_positive_int("PRODUCT_CAP", 4096),
        joining_cap=_read_positive_int("JOINING_CAP", 64),
        orbit_union_cap=_read_positive_int("ORBIT_UNION_CAP", 20),
        depth_cap=_read_positive_int("DEPTH_CAP", 12),
        default_window=_read_positive_int("DEFAULT_WINDOW", 256),
        default_seed=_read_positive_int("DEFAULT_SEED", 20140917),
        report_bucket=os.getenv("REPORT_BUCKET") or None,
        aws_region=os.getenv("AWS_REGION", "us-east-1"),
    )

    LOGGER.debug("Configuration loaded", extra={"environment": config.environment, "dry_run": config.dry_run})
    return config


__all__ = ["AppConfig", "load_config"]
