"""Radicals, minimal projective covers and the Heller operator."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import galois

from src import fields as fl
from src.config import DEFAULT_CONFIG, RunConfig
from src.decomp import strip_projectives
from src.errors import InvalidModuleError
from src.modules import Module, dual, free_presentation, radical_basis, submodule

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoverData:
    module: Module
    cover_rank: int
    cover_map: galois.FieldArray  # dim m x cover_rank p^r, from the monomial basis of KG^g
    kernel: Module
    inclusion: galois.FieldArray  # cover_rank p^r x dim kernel
    free: Module

    def is_minimal(self) -> bool:
        """The kernel sits inside the radical of the free module."""
        if self.kernel.dim == 0:
            return True
        rad = radical_basis(self.free)
        return fl.rank(fl.hstack(type(rad), [rad, self.inclusion])) == rad.shape[1]


def radical_submodule(m: Module) -> galois.FieldArray:
    """Basis of J(KG) m = sum_i im A_i."""
    if m.dim == 0:
        return m.gf.Zeros((0, 0))
    return radical_basis(m)


def projective_cover(m: Module) -> CoverData:
    if m.dim == 0:
        raise InvalidModuleError("the zero module has no cover to compute")
    pres = free_presentation(m)
    kernel = submodule(pres.free, pres.kernel)
    cover = CoverData(m, pres.rank, pres.cover, kernel, pres.kernel, pres.free)
    logger.debug("cover of dim %d: rank %d, kernel dim %d", m.dim, cover.cover_rank, kernel.dim)
    return cover


def omega(m: Module, config: RunConfig = DEFAULT_CONFIG) -> Module:
    core, _ = strip_projectives(m, config)
    if core.dim == 0:
        return core
    return projective_cover(core).kernel


def omega_inverse(m: Module, config: RunConfig = DEFAULT_CONFIG) -> Module:
    return dual(omega(dual(m), config))


def omega_n(m: Module, n: int, config: RunConfig = DEFAULT_CONFIG) -> Module:
    """Omega^n of the projective-free core; n may be negative and n = 0 gives the core."""
    current, _ = strip_projectives(m, config)
    step = omega if n >= 0 else omega_inverse
    for _ in range(abs(n)):
        current = step(current, config)
    return current
