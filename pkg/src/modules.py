"""
Modules for elementary abelian p-groups E = C_p^r over GF(p), stored in A-form.

A module is a tuple of commuting matrices A_1..A_r with A_i^p = 0; the group
generator g_i acts as I + A_i. The group algebra is GF(p)[x_1..x_r]/(x_i^p) with
x_i = g_i - 1, so monomials x^a (0 <= a_i < p) act as products of powers of the A_i.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property

import galois
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src import fields as fl
from src.config import DEFAULT_CONFIG, RunConfig
from src.errors import InvalidModuleError, ModuleMismatchError, SubgroupError, UnsupportedError
from src.fields import FieldSpec

logger = logging.getLogger(__name__)


class GroupSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int = Field(..., description="The prime p of C_p^r.")
    rank: int = Field(..., ge=1, description="Number of independent generators r.")

    @field_validator("p")
    @classmethod
    def _prime(cls, value: int) -> int:
        if value < 2 or not galois.is_prime(value):
            raise ValueError(f"{value} is not prime")
        return value

    @property
    def order(self) -> int:
        return self.p**self.rank

    def exponents(self) -> list[tuple[int, ...]]:
        """Exponent vectors of the monomial basis, lexicographic."""
        return list(itertools.product(range(self.p), repeat=self.rank))

    def index(self, a) -> int:
        out = 0
        for ai in a:
            out = out * self.p + ai
        return out


class SubgroupSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: GroupSpec = Field(..., description="The ambient group.")
    basis: tuple[tuple[int, ...], ...] = Field(..., description="Generating vectors in GF(p)^r.")

    @model_validator(mode="after")
    def _shape(self) -> "SubgroupSpec":
        if not self.basis:
            raise ValueError("a subgroup needs at least one basis vector")
        for vector in self.basis:
            if len(vector) != self.group.rank:
                raise ValueError(f"basis vector {vector} does not have length {self.group.rank}")
            if any(not 0 <= x < self.group.p for x in vector):
                raise ValueError(f"basis vector {vector} is not reduced mod {self.group.p}")
        return self


@dataclass(frozen=True, eq=False)
class Module:
    group: GroupSpec
    field: FieldSpec
    gens: tuple[galois.FieldArray, ...]

    def __post_init__(self):
        if self.field.e != 1:
            raise UnsupportedError("module data lives over prime fields only")
        if self.field.p != self.group.p:
            raise ModuleMismatchError(f"field {self.field} does not match group prime {self.group.p}")

    @property
    def dim(self) -> int:
        return self.gens[0].shape[0]

    @property
    def p(self) -> int:
        return self.group.p

    @property
    def gf(self) -> type[galois.FieldArray]:
        return fl.gf(self.field)

    @cached_property
    def digest(self) -> str:
        h = hashlib.blake2b(digest_size=16)
        h.update(f"{self.p}:{self.group.rank}:{self.dim}".encode())
        for g in self.gens:
            h.update(fl.as_int(g).tobytes())
        return h.hexdigest()

    def int_gens(self) -> np.ndarray:
        """Generators as an (r, n, n) integer array."""
        return np.stack([fl.as_int(g) for g in self.gens]) if self.dim else np.zeros((self.group.rank, 0, 0), np.int64)

    def conjugate(self, P: galois.FieldArray) -> "Module":
        """The module with generators P A P^-1."""
        P_inv = fl.inverse(P)
        return Module(self.group, self.field, tuple(P @ g @ P_inv for g in self.gens))

    def __repr__(self) -> str:
        return f"Module(p={self.p}, r={self.group.rank}, dim={self.dim}, {self.digest[:8]})"


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: Module
    target: Module
    basis: tuple[galois.FieldArray, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combination(self, coeffs) -> galois.FieldArray:
        field = self.source.gf
        shape = (self.target.dim, self.source.dim)
        if not self.basis:
            return field.Zeros(shape)
        stack = np.stack([fl.as_int(b).reshape(-1) for b in self.basis])
        flat = (np.asarray(coeffs, dtype=np.int64) @ stack) % self.source.p
        return field(flat.reshape(shape))

    def random_element(self, rng: np.random.Generator) -> galois.FieldArray:
        return self.combination(rng.integers(0, self.source.p, size=self.dim))


@dataclass(frozen=True, eq=False)
class Presentation:
    """A minimal free presentation KG^g -> M -> 0 in the monomial basis of KG^g."""

    module: Module
    lifts: galois.FieldArray  # n x g, lifts of a basis of M / rad M
    cover: galois.FieldArray  # n x g p^r, column (j, a) is x^a . lift_j
    kernel: galois.FieldArray  # g p^r x k, basis of the relation module
    free: Module

    @property
    def rank(self) -> int:
        return self.lifts.shape[1]


def from_rows(gens, p: int) -> Module:
    """Build a module over GF(p) from nested integer lists, one matrix per generator."""
    field = fl.prime_field(p)
    GF = fl.gf(field)
    mats = []
    for rows in gens:
        arr = np.asarray(rows, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 0)
        mats.append(GF(arr % p))
    return Module(GroupSpec(p=p, rank=len(mats)), field, tuple(mats))


def _check_compatible(m: Module, n: Module) -> None:
    if m.group != n.group or m.field != n.field:
        raise ModuleMismatchError(
            f"modules over different groups or fields: {m.group}/{m.field} vs {n.group}/{n.field}"
        )


def validate(m: Module) -> list[str]:
    """Violations of the module invariants, first violated identity first; empty when valid."""
    problems: list[str] = []
    n = m.gens[0].shape[0] if m.gens else 0
    if len(m.gens) != m.group.rank:
        problems.append(f"expected {m.group.rank} generators, got {len(m.gens)}")
    for i, a in enumerate(m.gens, start=1):
        if a.ndim != 2 or a.shape != (n, n):
            problems.append(f"A{i} has shape {a.shape}, expected {n}x{n}")
        elif type(a).order != m.field.order:
            problems.append(f"A{i} has entries over GF({type(a).order}), expected {m.field}")
    if problems:
        return problems
    for i, a in enumerate(m.gens, start=1):
        if not fl.is_zero(fl.matrix_power(a, m.p)):
            problems.append(f"A^p ≠ 0 for generator {i}")
    for (i, a), (j, b) in itertools.combinations(enumerate(m.gens, start=1), 2):
        if not fl.is_zero(a @ b - b @ a):
            problems.append(f"commutator nonzero for generators {i},{j}")
    return problems


def require_valid(m: Module) -> Module:
    problems = validate(m)
    if problems:
        raise InvalidModuleError("; ".join(problems))
    return m


def zero_module(group: GroupSpec, field: FieldSpec) -> Module:
    GF = fl.gf(field)
    return Module(group, field, tuple(GF.Zeros((0, 0)) for _ in range(group.rank)))


def trivial_module(group: GroupSpec, field: FieldSpec) -> Module:
    GF = fl.gf(field)
    return Module(group, field, tuple(GF.Zeros((1, 1)) for _ in range(group.rank)))


def regular_module(group: GroupSpec, field: FieldSpec) -> Module:
    """KG on the group-element basis g^a, a an exponent vector; g_i permutes the basis."""
    GF = fl.gf(field)
    size = group.order
    gens = []
    for i in range(group.rank):
        perm = np.zeros((size, size), dtype=np.int64)
        for a in group.exponents():
            b = list(a)
            b[i] = (b[i] + 1) % group.p
            perm[group.index(b), group.index(a)] = 1
        gens.append(GF(perm) - GF.Identity(size))
    return Module(group, field, tuple(gens))


def free_module(group: GroupSpec, field: FieldSpec, rank: int) -> Module:
    """KG^rank on the monomial basis (j, a), j-major; x_i shifts a_i up and kills a_i = p-1."""
    GF = fl.gf(field)
    size = group.order
    gens = []
    for i in range(group.rank):
        shift = np.zeros((size, size), dtype=np.int64)
        for a in group.exponents():
            if a[i] < group.p - 1:
                b = list(a)
                b[i] += 1
                shift[group.index(b), group.index(a)] = 1
        gens.append(fl.kron(GF.Identity(rank), GF(shift)))
    return Module(group, field, tuple(gens))


def direct_sum(m: Module, n: Module) -> Module:
    _check_compatible(m, n)
    return Module(m.group, m.field, tuple(fl.block_diag(m.gf, [a, b]) for a, b in zip(m.gens, n.gens)))


def direct_sum_all(modules, group: GroupSpec, field: FieldSpec) -> Module:
    modules = list(modules)
    for m in modules:
        if m.group != group or m.field != field:
            raise ModuleMismatchError("summands over different groups or fields")
    GF = fl.gf(field)
    if not modules:
        return zero_module(group, field)
    return Module(
        group, field, tuple(fl.block_diag(GF, [m.gens[i] for m in modules]) for i in range(group.rank))
    )


def tensor(m: Module, n: Module) -> Module:
    """(I + A) (x) (I + B) = I + A(x)I + I(x)B + A(x)B."""
    _check_compatible(m, n)
    GF = m.gf
    Im = GF.Identity(m.dim)
    In = GF.Identity(n.dim)
    gens = tuple(fl.kron(a, In) + fl.kron(Im, b) + fl.kron(a, b) for a, b in zip(m.gens, n.gens))
    return Module(m.group, m.field, gens)


def tensor_power(m: Module, k: int) -> Module:
    if k < 1:
        raise ValueError("tensor power needs k >= 1")
    out = m
    for _ in range(k - 1):
        out = tensor(out, m)
    return out


def _unipotent_inverse(a: galois.FieldArray, p: int) -> galois.FieldArray:
    """(I + A)^-1 = sum_{j < p} (-A)^j for A^p = 0."""
    GF = type(a)
    total = GF.Identity(a.shape[0])
    term = GF.Identity(a.shape[0])
    for _ in range(1, p):
        term = term @ (-a)
        total = total + term
    return total


def dual(m: Module) -> Module:
    GF = m.gf
    I = GF.Identity(m.dim)
    gens = tuple(_unipotent_inverse(a, m.p).T - I for a in m.gens)
    return Module(m.group, m.field, gens)


def restrict(m: Module, h: SubgroupSpec) -> Module:
    if h.group != m.group:
        raise ModuleMismatchError(f"subgroup of {h.group} cannot restrict a module for {m.group}")
    GF = m.gf
    if fl.rank(GF(np.asarray(h.basis, dtype=np.int64))) != len(h.basis):
        raise SubgroupError(f"dependent subgroup basis {h.basis}")
    I = GF.Identity(m.dim)
    units = [I + a for a in m.gens]
    gens = []
    for vector in h.basis:
        g = I
        for unit, exponent in zip(units, vector):
            if exponent:
                g = g @ fl.matrix_power(unit, exponent)
        gens.append(g - I)
    return Module(GroupSpec(p=m.p, rank=len(h.basis)), m.field, tuple(gens))


def monomial_stack(m: Module) -> np.ndarray:
    """Integer array (p^r, n, n) of the monomial operators x^a in exponent order."""
    p = m.p
    n = m.dim
    eye = np.eye(n, dtype=np.int64)
    powers = []
    for a in m.int_gens():
        row = [eye]
        for _ in range(1, p):
            row.append((row[-1] @ a) % p)
        powers.append(row)
    out = np.empty((m.group.order, n, n), dtype=np.int64)
    for idx, exps in enumerate(m.group.exponents()):
        op = eye
        for i, e in enumerate(exps):
            if e:
                op = (op @ powers[i][e]) % p
        out[idx] = op
    return out


def norm_operator(m: Module) -> galois.FieldArray:
    """Action of the norm element sum_g g = prod_i x_i^(p-1)."""
    return m.gf(monomial_stack(m)[-1])


def radical_basis(m: Module) -> galois.FieldArray:
    """Basis of J(KG) M = sum_i im A_i."""
    if m.dim == 0:
        return m.gf.Zeros((0, 0))
    return fl.column_space(fl.hstack(m.gf, m.gens))


def radical_layers(m: Module) -> list[int]:
    """Dimensions of rad^k M for k = 1, 2, ... down to zero."""
    dims = []
    current = m.gf.Identity(m.dim)
    while current.shape[1]:
        current = fl.column_space(fl.hstack(m.gf, [a @ current for a in m.gens]))
        dims.append(current.shape[1])
    return dims


def submodule(m: Module, basis: galois.FieldArray) -> Module:
    """Induced action on an invariant subspace with independent basis columns."""
    GF = m.gf
    k = basis.shape[1]
    if k == 0:
        return zero_module(m.group, m.field)
    gens = []
    for a in m.gens:
        x = fl.solve_linear(basis, a @ basis)
        if x is None:
            raise InvalidModuleError("subspace is not invariant under the generators")
        gens.append(x)
    return Module(m.group, m.field, tuple(GF(g) for g in gens))


def quotient(m: Module, basis: galois.FieldArray) -> Module:
    """Induced action on M / W for an invariant subspace W spanned by ``basis``."""
    GF = m.gf
    w = fl.column_space(basis) if basis.shape[1] else basis
    k = w.shape[1]
    if k == 0:
        return m
    comp = fl.complement_columns(w)
    if not comp:
        return zero_module(m.group, m.field)
    lift = GF.Identity(m.dim)[:, comp]
    q = fl.hstack(GF, [w, lift])
    q_inv = fl.inverse(q)
    for a in m.gens:
        if fl.solve_linear(w, a @ w) is None:
            raise InvalidModuleError("subspace is not invariant under the generators")
    return Module(m.group, m.field, tuple((q_inv @ a @ lift)[k:, :] for a in m.gens))


def free_presentation(m: Module) -> Presentation:
    """Minimal free presentation: lifts of a basis of M / rad M chosen in pivot order."""
    GF = m.gf
    p = m.p
    q = m.group.order
    n = m.dim
    if n == 0:
        return Presentation(m, GF.Zeros((0, 0)), GF.Zeros((0, 0)), GF.Zeros((0, 0)), zero_module(m.group, m.field))
    top = fl.complement_columns(radical_basis(m))
    g = len(top)
    lifts = GF.Identity(n)[:, top]
    images = (monomial_stack(m) @ fl.as_int(lifts)) % p  # (q, n, g)
    cover = GF(images.transpose(1, 2, 0).reshape(n, g * q))
    kernel = fl.nullspace(cover)
    return Presentation(m, lifts, cover, kernel, free_module(m.group, m.field, g))


def _hom_direct(m: Module, n: Module) -> tuple[galois.FieldArray, ...]:
    GF = m.gf
    Im = GF.Identity(m.dim)
    In = GF.Identity(n.dim)
    system = fl.vstack(GF, [fl.kron(In, a.T) - fl.kron(b, Im) for a, b in zip(m.gens, n.gens)])
    sol = fl.nullspace(system)
    return tuple(sol[:, k].reshape(n.dim, m.dim) for k in range(sol.shape[1]))


def _hom_presented(m: Module, n: Module) -> tuple[galois.FieldArray, ...]:
    """Homs M -> N as images of the top generators of M that kill the relation module."""
    GF = m.gf
    p = m.p
    q = m.group.order
    pres = free_presentation(m)
    g = pres.rank
    k = pres.kernel.shape[1]
    dn = n.dim
    xn = monomial_stack(n)
    rel = fl.as_int(pres.kernel).reshape(g, q, k)
    system = np.einsum("ast,jal->sljt", xn, rel) % p
    sol = fl.nullspace(GF(system.reshape(dn * k, g * dn)))
    if sol.shape[1] == 0:
        return ()
    section = fl.solve_linear(pres.cover, GF.Identity(m.dim))
    images = fl.as_int(sol).T.reshape(-1, g, dn)
    lifted = np.einsum("ast,hjt->hsja", xn, images) % p
    phis = (lifted.reshape(-1, dn, g * q) @ fl.as_int(section)) % p
    return tuple(GF(phi) for phi in phis)


def hom_space(m: Module, n: Module, config: RunConfig = DEFAULT_CONFIG) -> HomSpace:
    """Basis of {phi : phi A_i = B_i phi}; phi is dim n x dim m."""
    _check_compatible(m, n)
    if m.dim == 0 or n.dim == 0:
        return HomSpace(m, n, ())
    if m.dim * n.dim <= config.hom_direct_limit:
        basis = _hom_direct(m, n)
    else:
        basis = _hom_presented(m, n)
    return HomSpace(m, n, basis)


def end_space(m: Module, config: RunConfig = DEFAULT_CONFIG) -> HomSpace:
    return hom_space(m, m, config)


def fingerprint(m: Module) -> tuple:
    """Isomorphism invariant: monomial ranks, generic-line nilpotency ranks and Loewy layers."""
    if m.dim == 0:
        return (0,)
    GF = m.gf
    mono = monomial_stack(m)
    ranks = tuple(fl.rank(GF(op)) for op in mono[1:])
    lines: tuple = ()
    if m.group.rank == 2:
        a, b = m.gens
        combos = [b] + [a + GF(c) * b for c in range(m.p)]
        line_ranks = []
        for c in combos:
            power = c
            for _ in range(1, m.p):
                line_ranks.append(fl.rank(power))
                power = power @ c
        lines = tuple(line_ranks)
    return (m.dim, ranks, lines, tuple(radical_layers(m)))


def find_isomorphism(m: Module, n: Module, config: RunConfig = DEFAULT_CONFIG) -> galois.FieldArray | None:
    """An invertible module map M -> N, or None when M and N are not isomorphic."""
    _check_compatible(m, n)
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return m.gf.Zeros((0, 0))
    if fingerprint(m) != fingerprint(n):
        return None
    homs = hom_space(m, n, config)
    if homs.dim == 0:
        return None
    rng = config.rng("iso", m.digest, n.digest)
    for _ in range(config.iso_random_draws):
        phi = homs.random_element(rng)
        if fl.rank(phi) == m.dim:
            return phi

    # decomp builds on this module
    from src.decomp import decompose, is_indecomposable

    if is_indecomposable(m, config):
        back = hom_space(n, m, config)
        for f in homs.basis:
            for g in back.basis:
                if not fl.is_nilpotent(g @ f):
                    return f
        return None

    logger.debug("iso fallback through decompositions for dim %d", m.dim)
    dm = decompose(m, config)
    dn = decompose(n, config)
    if sorted(b.dim for b in dm.blocks) != sorted(b.dim for b in dn.blocks):
        return None
    GF = m.gf
    phi = GF.Zeros((m.dim, m.dim))
    used: set[int] = set()
    for k, block in enumerate(dm.blocks):
        for l, other in enumerate(dn.blocks):
            if l in used or other.dim != block.dim:
                continue
            local = find_isomorphism(block, other, config)
            if local is not None:
                used.add(l)
                rows = slice(dn.offsets[l], dn.offsets[l] + other.dim)
                cols = slice(dm.offsets[k], dm.offsets[k] + block.dim)
                phi[rows, cols] = local
                break
        else:
            return None
    return dn.witness @ phi @ fl.inverse(dm.witness)


def is_module_map(phi: galois.FieldArray, source: Module, target: Module) -> bool:
    if phi.shape != (target.dim, source.dim):
        return False
    return all(fl.is_zero(phi @ a - b @ phi) for a, b in zip(source.gens, target.gens))


def is_module_iso(phi: galois.FieldArray, source: Module, target: Module) -> bool:
    return source.dim == target.dim and is_module_map(phi, source, target) and fl.rank(phi) == source.dim


def is_isomorphic(m: Module, n: Module, config: RunConfig = DEFAULT_CONFIG) -> bool:
    return find_isomorphism(m, n, config) is not None


def is_self_dual(m: Module, config: RunConfig = DEFAULT_CONFIG) -> bool:
    return is_isomorphic(m, dual(m), config)
