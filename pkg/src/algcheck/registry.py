"""Catalogue of indecomposable isomorphism classes met during a closure run."""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from pathlib import Path

import yaml

from src.config import DEFAULT_CONFIG, RunConfig
from src.errors import ModuleFormatError
from src.formats import load_module, save_module
from src.modules import Module, find_isomorphism, fingerprint

logger = logging.getLogger(__name__)

INDEX_FILE = "index.yaml"


@dataclass
class RegistryEntry:
    label: str
    module: Module
    power: int = 1
    absolutely_indecomposable: bool | None = None
    periodic: str | None = None

    @property
    def dim(self) -> int:
        return self.module.dim


class IsoClassRegistry:
    """Labels C0001, C0002, ... in admission order; no two entries are isomorphic."""

    def __init__(self, config: RunConfig = DEFAULT_CONFIG):
        self.config = config
        self.entries: dict[str, RegistryEntry] = {}
        self._prints: dict[str, tuple] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, label: str) -> bool:
        return label in self.entries

    def __getitem__(self, label: str) -> RegistryEntry:
        return self.entries[label]

    @property
    def labels(self) -> list[str]:
        return list(self.entries)

    def lookup(self, m: Module) -> str | None:
        key = fingerprint(m)
        for label, entry in self.entries.items():
            if entry.dim == m.dim and self._prints[label] == key:
                if find_isomorphism(m, entry.module, self.config) is not None:
                    return label
        return None

    def admit(self, m: Module, power: int = 1, **flags) -> tuple[str, bool]:
        """Label of the class of m, registering it when new."""
        with self._lock:
            label = self.lookup(m)
            if label is not None:
                return label, False
            label = f"C{len(self.entries) + 1:04d}"
            self.entries[label] = RegistryEntry(label, m, power, **flags)
            self._prints[label] = fingerprint(m)
            logger.debug("registered %s (dim %d, power %d)", label, m.dim, power)
            return label, True

    def save(self, directory: str | Path) -> Path:
        """One module file per class plus an index."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        index = []
        for label, entry in self.entries.items():
            save_module(entry.module, directory / f"{label}.mod")
            index.append(
                {
                    "label": label,
                    "file": f"{label}.mod",
                    "dim": entry.dim,
                    "power": entry.power,
                    "absolutely_indecomposable": entry.absolutely_indecomposable,
                    "periodic": entry.periodic,
                }
            )
        with open(directory / INDEX_FILE, "w") as file:
            yaml.safe_dump({"seed": self.config.seed, "classes": index}, file, sort_keys=False)
        return directory

    @classmethod
    def load(cls, directory: str | Path, config: RunConfig = DEFAULT_CONFIG) -> "IsoClassRegistry":
        directory = Path(directory)
        with open(directory / INDEX_FILE, "r") as file:
            data = yaml.safe_load(file) or {}
        registry = cls(config)
        for row in data.get("classes", []):
            try:
                module = load_module(directory / row["file"])
            except KeyError as exc:
                raise ModuleFormatError(f"index entry without {exc}") from exc
            registry.entries[row["label"]] = RegistryEntry(
                row["label"],
                module,
                row.get("power", 1),
                row.get("absolutely_indecomposable"),
                row.get("periodic"),
            )
            registry._prints[row["label"]] = fingerprint(module)
        return registry
