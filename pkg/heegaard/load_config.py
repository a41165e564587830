import yaml
from dataclasses import dataclass


@dataclass
class EnumerationConfig:
    """Bounds on brute-force enumeration"""
    max_enum: int  # elements enumerated for Burger counts and Gauss sums
    isometry_bound: int  # exhaustive isometry search up to this group order
    isometry_search_nodes: int  # node budget above the bound
    class_count_enum_limit: int


@dataclass
class PrimalityConfig:
    """Configuration for the deterministic primality test"""
    trial_division_bound: int
    deterministic_limit: int


@dataclass
class SelftestConfig:
    """Configuration for the randomized oracle suite"""
    seed: int
    max_size: int
    cases: int


@dataclass
class LiftConfig:
    """Configuration for det-invariant lift re-checks"""
    randomized_lifts: int


REQUIRED_SECTIONS = ("enumeration", "primality", "selftest", "lifts")


def load_config_from_yaml(path: str) -> tuple[EnumerationConfig, PrimalityConfig, SelftestConfig, LiftConfig]:
    """Load and validate configuration from YAML file"""
    with open(path, "r") as f:
        raw = yaml.safe_load(f) or {}

    # Validate required keys exist
    missing = [section for section in REQUIRED_SECTIONS if section not in raw]
    if missing:
        raise ValueError(f"Configuration is missing the sections: {', '.join(missing)}")

    enumeration_config = EnumerationConfig(**raw["enumeration"])
    primality_config = PrimalityConfig(**raw["primality"])
    selftest_config = SelftestConfig(**raw["selftest"])
    lift_config = LiftConfig(**raw["lifts"])

    return (enumeration_config, primality_config, selftest_config, lift_config)
