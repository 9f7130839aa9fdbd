"""
Krull-Schmidt decomposition by Fitting splits of endomorphisms.

A part is terminal once its endomorphism ring is certified local: End / rad End
commutative with a single simple factor. Splitting endomorphisms are drawn at
random from End first; when End is non-local and random draws keep failing, a
splitting element is built from the semisimple quotient directly.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass

import galois
import numpy as np

from src import fields as fl
from src.config import DEFAULT_CONFIG, RunConfig
from src.errors import DecompositionError, NotAnEndomorphismError
from src.modules import (
    Module,
    end_space,
    find_isomorphism,
    hom_space,
    monomial_stack,
    norm_operator,
    quotient,
    submodule,
)
from src.radical import SemisimpleQuotient, algebra_radical, semisimple_quotient

logger = logging.getLogger(__name__)

QUICK_ATTEMPTS = 6
WITNESS_RANDOM_DRAWS = 24


@dataclass(frozen=True, eq=False)
class Decomposition:
    module: Module
    blocks: tuple[Module, ...]
    witness: galois.FieldArray
    summands: tuple[tuple[Module, int], ...]
    absolutely: tuple[bool, ...]

    @property
    def offsets(self) -> list[int]:
        out, at = [], 0
        for block in self.blocks:
            out.append(at)
            at += block.dim
        return out

    @property
    def dims(self) -> list[int]:
        return sorted(block.dim for block in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True, eq=False)
class EndStructure:
    dim: int
    local: bool
    semisimple_dim: int
    quotient: SemisimpleQuotient | None


def _fitting_bases(m: Module, theta: galois.FieldArray) -> tuple[galois.FieldArray, galois.FieldArray]:
    for a in m.gens:
        if not fl.is_zero(theta @ a - a @ theta):
            raise NotAnEndomorphismError("matrix does not commute with the generators")
    power = fl.matrix_power(theta, m.dim)
    return fl.nullspace(power), fl.column_space(power)


def fitting_split(m: Module, theta: galois.FieldArray) -> tuple[Module, Module]:
    """(ker theta^n, im theta^n) with their induced actions."""
    kernel, image = _fitting_bases(m, theta)
    return submodule(m, kernel), submodule(m, image)


@functools.lru_cache(maxsize=2048)
def end_structure(m: Module, config: RunConfig = DEFAULT_CONFIG) -> EndStructure:
    """Locality data of End(m)."""
    ends = end_space(m, config)
    if ends.dim == 1:
        return EndStructure(1, True, 1, None)
    rad = algebra_radical(ends.basis, verify=True, closed=True)
    quot = semisimple_quotient(rad)
    return EndStructure(ends.dim, quot.is_local, rad.semisimple_dim, quot)


def is_indecomposable(m: Module, config: RunConfig = DEFAULT_CONFIG) -> bool:
    if m.dim == 0:
        return False
    return end_structure(m, config).local


def is_absolutely_indecomposable(m: Module, config: RunConfig = DEFAULT_CONFIG) -> bool:
    if m.dim == 0:
        return False
    info = end_structure(m, config)
    return info.local and info.semisimple_dim == 1


def _try_split(m: Module, theta: galois.FieldArray):
    """Fitting bases of theta - c for the first scalar c that splits, else None."""
    GF = m.gf
    eye = GF.Identity(m.dim)
    for c in range(m.p):
        kernel, image = _fitting_bases(m, theta - GF(c) * eye)
        if kernel.shape[1] and image.shape[1]:
            return kernel, image
    return None


def _fallback_split(m: Module, info: EndStructure, ends):
    quot = info.quotient
    if quot is not None and quot.commutative:
        for y in quot.fixed:
            found = _try_split(m, y)
            if found:
                return found
    candidates = list(ends.basis)
    candidates += [a + b for i, a in enumerate(ends.basis) for b in ends.basis[i + 1 :]]
    for y in candidates:
        found = _try_split(m, y)
        if found:
            return found
    return None


def _find_split(m: Module, config: RunConfig, path: tuple[int, ...]):
    """Either ('split', kernel, image) or ('block', absolutely_indecomposable)."""
    ends = end_space(m, config)
    if ends.dim == 1:
        return ("block", True)
    rng = config.rng("split", *path)
    for _ in range(QUICK_ATTEMPTS):
        found = _try_split(m, ends.random_element(rng))
        if found:
            return ("split", *found)
    info = end_structure(m, config)
    if info.local:
        return ("block", info.semisimple_dim == 1)
    for attempt in range(config.split_attempts):
        found = _try_split(m, ends.random_element(rng))
        if found:
            logger.debug("split dim %d after %d extra attempts", m.dim, attempt + 1)
            return ("split", *found)
    logger.warning("random splitting failed on dim %d; building a splitting element", m.dim)
    found = _fallback_split(m, info, ends)
    if found is None:
        raise DecompositionError(f"could not split a non-local module of dim {m.dim}")
    return ("split", *found)


def _blocks(m: Module, config: RunConfig, path: tuple[int, ...]):
    if m.dim == 0:
        return []
    verdict = _find_split(m, config, path)
    if verdict[0] == "block":
        return [(m.gf.Identity(m.dim), m, verdict[1])]
    out = []
    for idx, basis in enumerate(verdict[1:]):
        part = submodule(m, basis)
        for inner, block, flag in _blocks(part, config, path + (idx,)):
            out.append((basis @ inner, block, flag))
    return out


def group_isomorphic(blocks, config: RunConfig = DEFAULT_CONFIG) -> list[tuple[Module, int]]:
    """Multiset of iso classes, first occurrence as representative."""
    classes: list[list] = []
    for block in blocks:
        for entry in classes:
            if entry[0].dim == block.dim and find_isomorphism(entry[0], block, config) is not None:
                entry[1] += 1
                break
        else:
            classes.append([block, 1])
    return [(rep, count) for rep, count in classes]


def decompose(m: Module, config: RunConfig = DEFAULT_CONFIG) -> Decomposition:
    """Decompose into indecomposables; the witness conjugates m into block-diagonal form."""
    found = _blocks(m, config, ())
    GF = m.gf
    witness = fl.hstack(GF, [basis for basis, _, _ in found]) if found else GF.Zeros((0, 0))
    blocks = tuple(block for _, block, _ in found)
    summands = tuple(group_isomorphic(blocks, config))
    logger.debug("dim %d splits as %s", m.dim, [b.dim for b in blocks])
    return Decomposition(m, blocks, witness, summands, tuple(flag for _, _, flag in found))


def free_rank(m: Module) -> int:
    """Number of free summands: the rank of the norm element."""
    if m.dim == 0:
        return 0
    return fl.rank(norm_operator(m))


def strip_projectives(m: Module, config: RunConfig = DEFAULT_CONFIG) -> tuple[Module, int]:
    """(core, free_rank): m modulo a maximal free submodule, which is a summand."""
    if m.dim == 0:
        return m, 0
    norm = norm_operator(m)
    _, pivots = fl.row_reduce(norm)
    if not pivots:
        return m, 0
    GF = m.gf
    generators = np.eye(m.dim, dtype=np.int64)[:, pivots]
    images = (monomial_stack(m) @ generators) % m.p
    span = fl.column_space(GF(np.concatenate(list(images), axis=1)))
    core = quotient(m, span)
    logger.debug("stripped %d free summands from dim %d", len(pivots), m.dim)
    return core, len(pivots)


def summand_witness(s: Module, t: Module, config: RunConfig = DEFAULT_CONFIG):
    """(iota, pi) with pi iota = id exhibiting the indecomposable s as a summand of t, else None."""
    if s.dim == 0 or s.dim > t.dim:
        return None
    into = hom_space(s, t, config)
    back = hom_space(t, s, config)
    if not into.dim or not back.dim:
        return None

    def split(f, g):
        gf = g @ f
        if fl.rank(gf) < s.dim:
            return None
        return f, fl.inverse(gf) @ g

    rng = config.rng("witness", s.digest, t.digest)
    for _ in range(WITNESS_RANDOM_DRAWS):
        found = split(into.random_element(rng), back.random_element(rng))
        if found:
            return found
    for f in into.basis:
        for g in back.basis:
            found = split(f, g)
            if found:
                return found
    return None


def multiplicity(s: Module, t: Module, config: RunConfig = DEFAULT_CONFIG) -> int:
    total = 0
    for rep, count in decompose(t, config).summands:
        if rep.dim == s.dim and find_isomorphism(s, rep, config) is not None:
            total += count
    return total
