import os
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv

from heegaard.load_config import (
    EnumerationConfig,
    LiftConfig,
    PrimalityConfig,
    SelftestConfig,
    load_config_from_yaml,
)

load_dotenv()

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "defaults.yaml"

# Config file and overrides
HEEGAARD_CONFIG = os.environ.get("HEEGAARD_CONFIG", str(DEFAULT_CONFIG_PATH))
HEEGAARD_MAX_ENUM = os.environ.get("HEEGAARD_MAX_ENUM")
HEEGAARD_ISOMETRY_BOUND = os.environ.get("HEEGAARD_ISOMETRY_BOUND")
HEEGAARD_SEED = os.environ.get("HEEGAARD_SEED")
HEEGAARD_DEBUG = os.environ.get("HEEGAARD_DEBUG", "0").lower() in ("1", "true", "yes")


@dataclass(frozen=True)
class Settings:
    enumeration: EnumerationConfig
    primality: PrimalityConfig
    selftest: SelftestConfig
    lifts: LiftConfig


def _int_override(name: str, value: str | None) -> int | None:
    if value is None or value == "":
        return None
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {value!r}")


def load_settings(path: str | None = None, environ: dict | None = None) -> Settings:
    """
    Build settings from the YAML defaults and apply environment overrides.

    Args:
        path: YAML file; defaults to HEEGAARD_CONFIG
        environ: mapping consulted for overrides; defaults to os.environ

    Returns:
        Settings bundling every configuration section
    """
    env = os.environ if environ is None else environ
    enumeration, primality, selftest, lifts = load_config_from_yaml(
        path or env.get("HEEGAARD_CONFIG", HEEGAARD_CONFIG)
    )

    max_enum = _int_override("HEEGAARD_MAX_ENUM", env.get("HEEGAARD_MAX_ENUM"))
    if max_enum is not None:
        enumeration = replace(enumeration, max_enum=max_enum)
    isometry_bound = _int_override("HEEGAARD_ISOMETRY_BOUND", env.get("HEEGAARD_ISOMETRY_BOUND"))
    if isometry_bound is not None:
        enumeration = replace(enumeration, isometry_bound=isometry_bound)
    seed = _int_override("HEEGAARD_SEED", env.get("HEEGAARD_SEED"))
    if seed is not None:
        selftest = replace(selftest, seed=seed)

    return Settings(enumeration=enumeration, primality=primality, selftest=selftest, lifts=lifts)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
