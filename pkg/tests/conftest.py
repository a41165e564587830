import random
from pathlib import Path

import pytest

from heegaard.config import get_settings
from heegaard.inputs import load_input

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees the shipped defaults, whatever the caller's environment says."""
    for name in ("HEEGAARD_CONFIG", "HEEGAARD_MAX_ENUM", "HEEGAARD_ISOMETRY_BOUND", "HEEGAARD_SEED"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def samples() -> Path:
    return SAMPLES


@pytest.fixture
def splitting():
    """Load a sample splitting by file stem as a SymplecticMatrix."""

    def load(stem: str):
        return load_input(SAMPLES / f"{stem}.yaml").to_symplectic()

    return load


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240601)
