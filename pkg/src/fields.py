"""
Exact arithmetic over GF(p) and GF(p^e) and the dense matrix kernel.

Matrices are two-dimensional ``galois.FieldArray`` values; the array type carries
its field. Elements of GF(p^e) are held in the integer representation of their
coefficient vector (``element.vector()`` recovers the degree < e coefficient list),
so hashing and byte encodings are deterministic.
"""

from __future__ import annotations

import functools
import logging

import galois
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.errors import DimensionError, FieldError

logger = logging.getLogger(__name__)


class FieldSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int = Field(..., description="Characteristic; must be prime.")
    e: int = Field(1, ge=1, description="Extension degree over GF(p).")
    modulus: tuple[int, ...] = Field(
        (),
        description=(
            "Coefficients, highest degree first, of the monic irreducible polynomial "
            "defining GF(p^e). Empty for the prime field."
        ),
    )

    @field_validator("p")
    @classmethod
    def _prime(cls, value: int) -> int:
        if value < 2 or not galois.is_prime(value):
            raise ValueError(f"{value} is not prime")
        return value

    @model_validator(mode="after")
    def _irreducible(self) -> "FieldSpec":
        if self.e == 1:
            if self.modulus:
                raise ValueError("the prime field takes no modulus")
            return self
        if len(self.modulus) != self.e + 1 or self.modulus[0] != 1:
            raise ValueError(f"modulus must be monic of degree {self.e}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ValueError(f"modulus coefficients must be residues mod {self.p}")
        poly = galois.Poly(list(self.modulus), field=galois.GF(self.p))
        if not poly.is_irreducible():
            raise ValueError(f"modulus {poly} is reducible over GF({self.p})")
        return self

    @property
    def order(self) -> int:
        return self.p**self.e

    def __str__(self) -> str:
        return f"GF({self.p})" if self.e == 1 else f"GF({self.p}^{self.e})"


def prime_field(p: int) -> FieldSpec:
    try:
        return FieldSpec(p=p)
    except ValidationError as exc:
        raise FieldError(str(exc)) from exc


def extension_field(p: int, e: int) -> FieldSpec:
    """GF(p^e) over the lexicographically first monic irreducible of degree e."""
    if e == 1:
        return prime_field(p)
    try:
        prime_field(p)
        poly = galois.irreducible_poly(p, e, method="min")
        return FieldSpec(p=p, e=e, modulus=tuple(int(c) for c in poly.coeffs))
    except ValidationError as exc:
        raise FieldError(str(exc)) from exc


@functools.lru_cache(maxsize=None)
def gf(spec: FieldSpec) -> type[galois.FieldArray]:
    if spec.e == 1:
        return galois.GF(spec.p)
    modulus = galois.Poly(list(spec.modulus), field=galois.GF(spec.p))
    return galois.GF(spec.p**spec.e, irreducible_poly=modulus)


def spec_of(m: galois.FieldArray) -> FieldSpec:
    field = type(m)
    if field.degree == 1:
        return prime_field(field.characteristic)
    return FieldSpec(
        p=field.characteristic,
        e=field.degree,
        modulus=tuple(int(c) for c in field.irreducible_poly.coeffs),
    )


def as_int(m: galois.FieldArray) -> np.ndarray:
    return m.view(np.ndarray).astype(np.int64)


def zeros(field: type[galois.FieldArray], rows: int, cols: int) -> galois.FieldArray:
    return field.Zeros((rows, cols))


def identity(field: type[galois.FieldArray], n: int) -> galois.FieldArray:
    return field.Identity(n)


def random_matrix(field: type[galois.FieldArray], rows: int, cols: int, rng: np.random.Generator) -> galois.FieldArray:
    return field(rng.integers(0, field.order, size=(rows, cols)))


def concat(field: type[galois.FieldArray], parts, axis: int) -> galois.FieldArray:
    return field(np.concatenate([np.asarray(part.view(np.ndarray)) for part in parts], axis=axis))


def hstack(field: type[galois.FieldArray], parts) -> galois.FieldArray:
    return concat(field, parts, axis=1)


def vstack(field: type[galois.FieldArray], parts) -> galois.FieldArray:
    return concat(field, parts, axis=0)


def block_diag(field: type[galois.FieldArray], blocks) -> galois.FieldArray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.Zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def is_zero(m: galois.FieldArray) -> bool:
    return not np.any(m.view(np.ndarray))


def row_reduce(m: galois.FieldArray, ncols: int | None = None) -> tuple[galois.FieldArray, list[int]]:
    """Reduced row echelon form and pivot columns, pivoting on the first nonzero entry.

    Only the first ``ncols`` columns are used as pivot columns; the rest are carried.
    """
    a = m.copy()
    rows, cols = a.shape
    ncols = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c].view(np.ndarray))
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] / a[r, c]
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col.view(np.ndarray))
        if hit.size:
            a[hit] = a[hit] - col[hit][:, None] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: galois.FieldArray) -> int:
    if m.size == 0:
        return 0
    return len(row_reduce(m)[1])


def nullspace(m: galois.FieldArray) -> galois.FieldArray:
    """Columns form a basis of the right kernel."""
    field = type(m)
    rows, cols = m.shape
    if rows == 0:
        return field.Identity(cols)
    rref, pivots = row_reduce(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    out = field.Zeros((cols, len(free)))
    if not free:
        return out
    out[free, np.arange(len(free))] = 1
    if pivots:
        out[pivots, :] = -rref[: len(pivots)][:, free]
    return out


def column_space(m: galois.FieldArray) -> galois.FieldArray:
    """Basis of the column span, taken from the pivot columns of ``m`` itself."""
    if m.size == 0:
        return type(m).Zeros((m.shape[0], 0))
    _, pivots = row_reduce(m)
    return m[:, pivots]


def complement_columns(basis: galois.FieldArray) -> list[int]:
    """Standard basis indices extending ``basis`` (independent columns) to the whole space."""
    field = type(basis)
    n, k = basis.shape
    _, pivots = row_reduce(hstack(field, [basis, field.Identity(n)]))
    return [c - k for c in pivots if c >= k]


def kron(a: galois.FieldArray, b: galois.FieldArray) -> galois.FieldArray:
    """Kronecker product, row-major block layout."""
    ra, ca = a.shape
    rb, cb = b.shape
    prod = a[:, None, :, None] * b[None, :, None, :]
    return prod.reshape(ra * rb, ca * cb)


def solve_linear(system: galois.FieldArray, rhs: galois.FieldArray) -> galois.FieldArray | None:
    """One solution X of ``system @ X == rhs``, or None when inconsistent."""
    if system.shape[0] != rhs.shape[0]:
        raise DimensionError(f"row counts differ: {system.shape[0]} vs {rhs.shape[0]}")
    field = type(system)
    n = system.shape[1]
    k = rhs.shape[1]
    if system.shape[0] == 0:
        return field.Zeros((n, k))
    rref, pivots = row_reduce(hstack(field, [system, rhs]), ncols=n)
    r = len(pivots)
    if not is_zero(rref[r:, n:]):
        return None
    out = field.Zeros((n, k))
    if r:
        out[pivots] = rref[:r, n:]
    return out


def inverse(m: galois.FieldArray) -> galois.FieldArray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError(f"not square: {m.shape}")
    out = solve_linear(m, type(m).Identity(n))
    if out is None:
        raise DimensionError("matrix is singular")
    return out


def matrix_power(m: galois.FieldArray, k: int) -> galois.FieldArray:
    result = type(m).Identity(m.shape[0])
    base = m
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def is_nilpotent(m: galois.FieldArray) -> bool:
    n = m.shape[0]
    power = m
    reached = 1
    while reached < n and not is_zero(power):
        power = power @ power
        reached *= 2
    return is_zero(power)


def extend_scalars(m: galois.FieldArray, target: FieldSpec) -> galois.FieldArray:
    source = type(m)
    if source.characteristic != target.p:
        raise FieldError(f"characteristic {source.characteristic} cannot embed into {target}")
    if source.degree != 1 and spec_of(m) != target:
        raise FieldError(f"only prime-field matrices are extended; got {source.name}")
    return gf(target)(m.view(np.ndarray))
