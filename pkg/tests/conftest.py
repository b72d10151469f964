"""Pytest configuration: import path, environment defaults and shared systems."""

from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.common import config as config_module  # noqa: E402
from src.systems.models import CylinderSystem  # noqa: E402

DATA_DIR = ROOT / "docs" / "data"

os.environ.setdefault("APP_ENV", "dev")
os.environ.setdefault("DRY_RUN", "true")


@pytest.fixture(autouse=True)
def _base_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("APP_ENV", "dev")
    monkeypatch.setenv("DRY_RUN", "true")
    monkeypatch.setenv("REPORT_BUCKET", "")
    for name in (
        "SUBSET_CAP",
        "LATTICE_CAP",
        "SUPPORT_CAP",
        "PRODUCT_CAP",
        "JOINING_CAP",
        "ORBIT_UNION_CAP",
        "DEPTH_CAP",
        "DEFAULT_WINDOW",
        "DEFAULT_SEED",
    ):
        monkeypatch.delenv(name, raising=False)
    config_module.load_config(refresh=True)


@pytest.fixture
def odometer() -> CylinderSystem:
    return CylinderSystem(kind="odometer")


@pytest.fixture
def full_shift() -> CylinderSystem:
    return CylinderSystem(kind="full-shift", alphabet=2)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
