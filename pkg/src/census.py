"""
Census of C_p x C_p modules of small dimension up to isomorphism.

Isomorphism classes of d-dimensional modules are orbits of commuting pairs
(A1, A2) with A^p = 0 under simultaneous conjugation by GL_d(p). Every orbit
contains a pair with A1 in Jordan form, so candidates are (J, A2) with A2 in the
centralizer of J; orbits are then walked exactly by breadth-first search over
generators of GL_d(p). Pairs are encoded as base-p integers in row-major order of
(A1, A2), so the least key of an orbit is the lexicographically least generator
tuple, which serves as the canonical representative.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import galois
import numpy as np
import yaml

from src import fields as fl
from src.algcheck.registry import IsoClassRegistry
from src.config import DEFAULT_CONFIG, RunConfig
from src.decomp import decompose, is_absolutely_indecomposable, is_indecomposable
from src.errors import UnsupportedError
from src.formats import from_data, save_module, to_data
from src.modules import GroupSpec, Module, free_module, monomial_stack, quotient, submodule
from src.output_pydantic import CensusClass, CensusResult

logger = logging.getLogger(__name__)

CANONICAL_MAX_DIM = 4
CHUNK = 1 << 20


def gl_order(d: int, p: int) -> int:
    return math.prod(p**d - p**k for k in range(d))


def partitions(d: int, max_part: int) -> list[tuple[int, ...]]:
    """Partitions of d into parts of size at most max_part, largest parts first."""
    if d == 0:
        return [()]
    out = []
    for first in range(min(d, max_part), 0, -1):
        for rest in partitions(d - first, first):
            out.append((first,) + rest)
    return out


def jordan_matrix(parts: tuple[int, ...]) -> np.ndarray:
    """Nilpotent Jordan form with blocks of the given sizes; ones on the superdiagonal."""
    d = sum(parts)
    out = np.zeros((d, d), dtype=np.int64)
    at = 0
    for size in parts:
        for k in range(size - 1):
            out[at + k, at + k + 1] = 1
        at += size
    return out


def gl_generators(d: int, p: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """(P, P^-1) for elementary transvections and one primitive diagonal element."""
    eye = np.eye(d, dtype=np.int64)
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                t = eye.copy()
                t[i, j] = 1
                t_inv = eye.copy()
                t_inv[i, j] = p - 1
                gens.append((t, t_inv))
    if p > 2:
        g = int(galois.primitive_root(p))
        diag = eye.copy()
        diag[0, 0] = g
        diag_inv = eye.copy()
        diag_inv[0, 0] = pow(g, -1, p)
        gens.append((diag, diag_inv))
    return gens


class PairCodec:
    """Base-p integer keys for r-tuples of d x d matrices."""

    def __init__(self, p: int, d: int, r: int = 2):
        if p ** (r * d * d) >= 2**63:
            raise UnsupportedError(f"keys for {r} generators of size {d} over GF({p}) exceed 64 bits")
        self.p, self.d, self.r = p, d, r
        self.powers = p ** np.arange(r * d * d - 1, -1, -1, dtype=np.int64)

    def encode(self, mats: np.ndarray) -> np.ndarray:
        flat = mats.reshape(mats.shape[0], -1)
        return flat @ self.powers

    def decode(self, keys: np.ndarray) -> np.ndarray:
        digits = (np.asarray(keys, dtype=np.int64)[:, None] // self.powers[None, :]) % self.p
        return digits.reshape(-1, self.r, self.d, self.d)


def orbit(key: int, codec: PairCodec) -> np.ndarray:
    """Sorted keys of the simultaneous-conjugation orbit of ``key``."""
    gens = gl_generators(codec.d, codec.p)
    seen = np.array([key], dtype=np.int64)
    frontier = codec.decode(seen)
    while frontier.shape[0]:
        found = []
        for start in range(0, frontier.shape[0], CHUNK // max(1, len(gens))):
            block = frontier[start : start + CHUNK // max(1, len(gens))]
            for mat, inv in gens:
                found.append(codec.encode((mat @ block @ inv) % codec.p))
        fresh = np.unique(np.concatenate(found))
        fresh = fresh[~np.isin(fresh, seen, assume_unique=True)]
        seen = np.union1d(seen, fresh)
        frontier = codec.decode(fresh)
    return seen


def _module_from_key(key: int, codec: PairCodec) -> Module:
    field = fl.prime_field(codec.p)
    GF = fl.gf(field)
    mats = codec.decode(np.array([key]))[0]
    return Module(GroupSpec(p=codec.p, rank=codec.r), field, tuple(GF(a) for a in mats))


def canonical_representative(m: Module, config: RunConfig = DEFAULT_CONFIG) -> Module:
    """Lexicographically least generator tuple in the conjugation orbit of m."""
    if m.dim > CANONICAL_MAX_DIM:
        raise UnsupportedError(f"canonical forms stop at dim {CANONICAL_MAX_DIM}; use registry labels instead")
    if m.dim == 0:
        return m
    if gl_order(m.dim, m.p) > config.census.max_group_order:
        raise UnsupportedError(f"GL_{m.dim}({m.p}) is larger than max_group_order")
    codec = PairCodec(m.p, m.dim, m.group.rank)
    key = int(codec.encode(m.int_gens()[None])[0])
    return _module_from_key(int(orbit(key, codec)[0]), codec)


def _nilpotent_mask(stack: np.ndarray, p: int) -> np.ndarray:
    power = stack
    for _ in range(p - 1):
        power = np.matmul(power, stack) % p
    return ~power.reshape(power.shape[0], -1).any(axis=1)


def _centralizer(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (c, d, d) of the matrices commuting with a."""
    GF = galois.GF(p)
    d = a.shape[0]
    A = GF(a)
    eye = GF.Identity(d)
    basis = fl.nullspace(fl.kron(A, eye) - fl.kron(eye, A.T))
    return fl.as_int(basis).T.reshape(-1, d, d)


def _candidates(p: int, d: int, budget: int) -> tuple[np.ndarray, list[str]]:
    """Keys of (J, A2) over Jordan types J with A2 commuting, A2^p = 0."""
    codec = PairCodec(p, d)
    notes = []
    keys = []
    types = partitions(d, p)
    for parts in types:
        j = jordan_matrix(parts)
        if not j.any():
            seconds = np.stack([jordan_matrix(q) for q in types])
        else:
            basis = _centralizer(j, p)
            c = basis.shape[0]
            if p**c > budget:
                notes.append(f"Jordan type {parts}: centralizer of size {p}^{c} exceeds max_pairs")
                continue
            chunks = []
            for start in range(0, p**c, CHUNK):
                idx = np.arange(start, min(p**c, start + CHUNK), dtype=np.int64)
                coeffs = (idx[:, None] // p ** np.arange(c, dtype=np.int64)[None, :]) % p
                mats = np.einsum("nc,cij->nij", coeffs, basis) % p
                chunks.append(mats[_nilpotent_mask(mats, p)])
            seconds = np.concatenate(chunks)
        pairs = np.stack([np.broadcast_to(j, seconds.shape), seconds], axis=1)
        keys.append(codec.encode(pairs))
    return np.unique(np.concatenate(keys)) if keys else np.zeros(0, np.int64), notes


def _classify(m: Module, config: RunConfig) -> tuple[bool, bool]:
    indecomposable = is_indecomposable(m, config)
    return indecomposable, indecomposable and is_absolutely_indecomposable(m, config)


def enumerate_modules(
    p: int, d: int, indecomposable_only: bool = False, config: RunConfig = DEFAULT_CONFIG
) -> CensusResult:
    """Exhaustive census of d-dimensional C_p x C_p modules over GF(p)."""
    fl.prime_field(p)
    settings = config.census
    if d < 1:
        raise UnsupportedError("census dimension must be positive")
    if d > CANONICAL_MAX_DIM:
        raise UnsupportedError(f"exhaustive census stops at dim {CANONICAL_MAX_DIM}; use stretch mode")
    if gl_order(d, p) > settings.max_group_order:
        note = f"|GL_{d}({p})| = {gl_order(d, p)} exceeds max_group_order"
        logger.warning(note)
        return CensusResult(
            p=p, dim=d, mode="exhaustive", total_classes=0, classes=[], indecomposable_count=0,
            abs_indecomposable_count=0, swap_classes=0, partial=True, note=note,
        )

    codec = PairCodec(p, d)
    remaining, notes = _candidates(p, d, settings.max_pairs)
    found: list[tuple[int, int, np.ndarray]] = []
    while remaining.size:
        seen = orbit(int(remaining[0]), codec)
        found.append((int(seen[0]), seen.size, seen))
        remaining = np.setdiff1d(remaining, seen, assume_unique=True)
    logger.info("census p=%d d=%d: %d classes", p, d, len(found))
    found.sort(key=lambda item: item[0])

    modules = [_module_from_key(key, codec) for key, _, _ in found]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        flags = list(pool.map(lambda m: _classify(m, config), modules))

    swapped: dict[int, int] = {}
    for key, _, seen in found:
        mats = codec.decode(seen)
        swapped[key] = int(codec.encode(mats[:, ::-1]).min())

    labels = {key: f"M{k + 1:03d}" for k, (key, _, _) in enumerate(found)}
    classes = []
    for (key, size, _), m, (indec, absolute) in zip(found, modules, flags):
        if indecomposable_only and not indec:
            continue
        classes.append(
            CensusClass(
                label=labels[key],
                module=to_data(m),
                orbit_size=size,
                indecomposable=indec,
                absolutely_indecomposable=absolute,
                swap_label=labels[swapped[key]],
            )
        )
    listed = {c.label for c in classes}
    pairs = {frozenset((c.label, c.swap_label)) for c in classes if c.swap_label in listed}
    return CensusResult(
        p=p,
        dim=d,
        mode="exhaustive",
        total_pairs=sum(size for _, size, _ in found),
        total_classes=len(found),
        classes=classes,
        indecomposable_count=sum(f[0] for f in flags),
        abs_indecomposable_count=sum(f[1] for f in flags),
        swap_classes=len(pairs),
        partial=bool(notes),
        note="; ".join(notes),
    )


def stretch_census(p: int, d: int, config: RunConfig = DEFAULT_CONFIG) -> CensusResult:
    """Observed indecomposables of dim d among submodules and quotients of small free modules."""
    group = GroupSpec(p=p, rank=2)
    field = fl.prime_field(p)
    GF = fl.gf(field)
    rng = config.rng("stretch", p, d)
    registry = IsoClassRegistry(config)
    rank = max(1, math.ceil((d + 1) / group.order))
    free = free_module(group, field, rank)
    ops = monomial_stack(free)
    tops = [k * group.order for k in range(rank)]
    for _ in range(config.census.stretch_samples):
        coeffs = rng.integers(0, p, size=(free.dim, int(rng.integers(1, 3))))
        coeffs[tops, :] = 0  # generators inside the radical
        span = fl.column_space(GF(np.concatenate(list((ops @ coeffs) % p), axis=1)))
        for candidate in (submodule(free, span), quotient(free, span)):
            if candidate.dim < d:
                continue
            for block in decompose(candidate, config).blocks:
                if block.dim == d:
                    registry.admit(block)
    logger.info("stretch census p=%d d=%d: %d classes observed", p, d, len(registry))

    classes = []
    for label, entry in registry.entries.items():
        absolute = is_absolutely_indecomposable(entry.module, config)
        swap = Module(group, field, tuple(reversed(entry.module.gens)))
        classes.append(
            CensusClass(
                label=label,
                module=to_data(entry.module),
                indecomposable=True,
                absolutely_indecomposable=absolute,
                swap_label=registry.lookup(swap) or "-",
            )
        )
    listed = {c.label for c in classes}
    pairs = {frozenset((c.label, c.swap_label)) for c in classes if c.swap_label in listed}
    unpaired = sum(c.swap_label not in listed for c in classes)
    return CensusResult(
        p=p,
        dim=d,
        mode="stretch",
        total_classes=len(classes),
        classes=classes,
        indecomposable_count=len(classes),
        abs_indecomposable_count=sum(c.absolutely_indecomposable for c in classes),
        swap_classes=len(pairs) + unpaired,
        note=f"observed in {config.census.stretch_samples} samples; not an exhaustive count",
    )


def census_modules(result: CensusResult) -> list[tuple[str, Module]]:
    return [(c.label, from_data(c.module)) for c in result.classes]


def write_census(result: CensusResult, directory: str | Path) -> Path:
    """One module file per listed class plus an index with flags."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    index = []
    for c in result.classes:
        save_module(from_data(c.module), directory / f"{c.label}.mod")
        row = c.model_dump(exclude={"module"})
        row["file"] = f"{c.label}.mod"
        index.append(row)
    summary = result.model_dump(exclude={"classes"})
    with open(directory / "index.yaml", "w") as file:
        yaml.safe_dump({**summary, "classes": index}, file, sort_keys=False)
    return directory
