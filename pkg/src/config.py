import hashlib
import os
from pathlib import Path

import numpy as np
import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

load_dotenv()

# "A1GEBRA1C" in hex digits (G -> 6, R -> 7).
DEFAULT_SEED = 0xA16EB7A1C
CACHE_ENV = "GREENRING_CACHE"

ROOT = Path(__file__).resolve().parent.parent

files = {
    "defaults": ROOT / "config" / "defaults.yaml",
    "stages": ROOT / "config" / "stages.yaml",
}


class Budgets(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_classes: int = Field(64, gt=0, description="Largest number of iso classes a closure may register.")
    max_dim: int = Field(4096, gt=0, description="Largest tensor product dimension a closure may form.")
    max_steps: int = Field(512, gt=0, description="Largest number of tensor-decompose steps in a closure.")
    omega_window: int = Field(6, gt=0, description="Largest |i| compared against Heller translates.")


class CensusSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_group_order: int = Field(25_000_000, gt=0, description="Largest |GL_d(p)| walked by orbit search.")
    max_pairs: int = Field(5_000_000, gt=0, description="Largest candidate matrix count before the census is flagged partial.")
    stretch_samples: int = Field(2000, gt=0, description="Random quotient modules drawn in stretch mode.")


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64, description="Root seed of every randomized step.")
    workers: int = Field(1, ge=1, description="Worker threads for closures and the census.")
    cache_dir: Path = Field(Path(".greenring-cache"), description="Registry cache directory.")
    budgets: Budgets = Field(default_factory=Budgets)
    iso_random_draws: int = Field(40, ge=0, description="Random hom draws before the exact iso fallback.")
    split_attempts: int = Field(200, gt=0, description="Random Fitting attempts before the idempotent fallback.")
    hom_direct_limit: int = Field(400, ge=0, description="Largest dim product solved by the intertwining system.")
    census: CensusSettings = Field(default_factory=CensusSettings)

    def echo(self) -> dict:
        """Seed, budgets and workers, as embedded in every report."""
        return {
            "seed": self.seed,
            "workers": self.workers,
            "budgets": self.budgets.model_dump(),
        }

    def rng(self, *keys) -> np.random.Generator:
        return derive_rng(self.seed, *keys)

    def with_seed(self, seed: int) -> "RunConfig":
        return self.model_copy(update={"seed": seed})


def _key_to_int(key) -> int:
    if isinstance(key, int) and key >= 0:
        return key
    digest = hashlib.blake2b(repr(key).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def derive_rng(seed: int, *keys) -> np.random.Generator:
    """Independent generator for a branch; the same keys always give the same stream."""
    return np.random.default_rng([seed, *(_key_to_int(k) for k in keys)])


def load_config(path: str | Path | None = None, **overrides) -> RunConfig:
    """Read the YAML defaults (or ``path``), apply overrides, then the cache env var."""
    with open(path or files["defaults"], "r") as file:
        data = yaml.safe_load(file) or {}

    for key, value in overrides.items():
        if value is None:
            continue
        if key in Budgets.model_fields:
            data.setdefault("budgets", {})[key] = value
        else:
            data[key] = value

    cache = os.getenv(CACHE_ENV)
    if cache:
        data["cache_dir"] = cache
    return RunConfig.model_validate(data)


def load_stages(path: str | Path | None = None) -> dict:
    with open(path or files["stages"], "r") as file:
        return yaml.safe_load(file)


DEFAULT_CONFIG = RunConfig()
