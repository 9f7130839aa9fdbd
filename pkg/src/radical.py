"""
Jacobson radicals of matrix algebras over GF(p).

The main route is the iterated trace-form method: with integer lifts of the
matrices, I_0 is the radical of the trace form and

    I_i = {a in I_(i-1) : g_i(ab) = 0 for all b},  g_i(x) = (Tr(x^(p^i)) mod p^(i+1)) / p^i

for i up to floor(log_p n); the last I_i is the radical. Small algebras can be
checked against a brute-force search for the largest nil ideal.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import galois
import numpy as np

from src import fields as fl
from src.errors import NotClosedError, UnsupportedError

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_DIM = 6
BRUTE_FORCE_MAX_ELEMENTS = 3**8


@dataclass(frozen=True, eq=False)
class AlgebraRadical:
    algebra: tuple[galois.FieldArray, ...]
    radical_basis: tuple[galois.FieldArray, ...]
    semisimple_dim: int
    method: str = "trace"

    @property
    def dim(self) -> int:
        return len(self.algebra)

    def _columns(self, mats) -> galois.FieldArray:
        field = type(self.algebra[0])
        n = self.algebra[0].shape[0]
        if not mats:
            return field.Zeros((n * n, 0))
        return field(np.stack([fl.as_int(m).reshape(-1) for m in mats], axis=1))

    def complement(self) -> tuple[galois.FieldArray, ...]:
        """Algebra basis elements whose classes form a basis of algebra / radical."""
        if not self.algebra:
            return ()
        rad = self._columns(self.radical_basis)
        field = type(rad)
        joined = fl.hstack(field, [rad, self._columns(self.algebra)])
        _, pivots = fl.row_reduce(joined)
        k = len(self.radical_basis)
        return tuple(self.algebra[c - k] for c in pivots if c >= k)

    def in_radical(self, x: galois.FieldArray) -> bool:
        if not self.radical_basis:
            return fl.is_zero(x)
        col = type(x)(fl.as_int(x).reshape(-1, 1))
        return fl.solve_linear(self._columns(self.radical_basis), col) is not None


@dataclass(frozen=True, eq=False)
class SemisimpleQuotient:
    """Shape of algebra / radical: whether it is commutative and, if so, its F_p-points."""

    radical: AlgebraRadical
    commutative: bool
    fixed: tuple[galois.FieldArray, ...]

    @property
    def factors(self) -> int | None:
        """Number of simple factors when the quotient is commutative."""
        return len(self.fixed) if self.commutative else None

    @property
    def is_local(self) -> bool:
        return self.commutative and len(self.fixed) == 1


def _flatten(mats: list[galois.FieldArray]) -> np.ndarray:
    return np.stack([fl.as_int(m).reshape(-1) for m in mats])


def _batched_nilpotent(stack: np.ndarray, p: int) -> np.ndarray:
    n = stack.shape[-1]
    power = stack % p
    reached = 1
    while reached < n:
        power = np.matmul(power, power) % p
        reached *= 2
    return ~power.reshape(power.shape[0], -1).any(axis=1)


def check_closed(basis: list[galois.FieldArray]) -> None:
    """Raise NotClosedError unless every product of basis elements lies in their span."""
    field = type(basis[0])
    cols = field(_flatten(basis).T)
    products = [a @ b for a in basis for b in basis]
    if fl.solve_linear(cols, field(_flatten(products).T)) is None:
        raise NotClosedError("basis is not closed under multiplication")


def _trace_level(elems: np.ndarray, level: int, p: int) -> np.ndarray:
    """g_level on a stack of integer matrices."""
    modulus = p ** (level + 1)
    power = elems % modulus
    for _ in range(level):
        acc = power
        for _ in range(p - 1):
            acc = np.matmul(acc, power) % modulus
        power = acc
    traces = np.trace(power, axis1=-2, axis2=-1) % modulus
    return (traces // p**level) % p


def _trace_method(basis: list[galois.FieldArray]) -> galois.FieldArray:
    """Coordinates (k x j) of a radical basis in terms of ``basis``."""
    field = type(basis[0])
    p = field.characteristic
    n = basis[0].shape[0]
    flat = _flatten(basis)
    flat_t = _flatten([b.T for b in basis])
    gram = (flat @ flat_t.T) % p
    coords = fl.nullspace(field(gram).T)
    stack = flat.reshape(-1, n, n)
    level = 1
    while p**level <= n and coords.shape[1]:
        elems = (fl.as_int(coords).T @ flat) % p
        prods = np.matmul(elems.reshape(-1, 1, n, n), stack.reshape(1, -1, n, n)) % p
        values = _trace_level(prods, level, p)
        coords = coords @ fl.nullspace(field(values).T)
        level += 1
    return coords


def _brute_force(basis: list[galois.FieldArray]) -> galois.FieldArray:
    """Coordinates of {x : xy nilpotent for every y in the algebra}."""
    field = type(basis[0])
    p = field.characteristic
    n = basis[0].shape[0]
    k = len(basis)
    if k > BRUTE_FORCE_MAX_DIM or p**k > BRUTE_FORCE_MAX_ELEMENTS:
        raise UnsupportedError(f"brute-force radical needs dim <= {BRUTE_FORCE_MAX_DIM}, got {k}")
    coeffs = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)
    elems = ((coeffs @ _flatten(basis)) % p).reshape(-1, n, n)
    nil = _batched_nilpotent(elems, p)
    members = []
    for idx in np.flatnonzero(nil):
        prods = np.matmul(elems[idx], elems) % p
        if _batched_nilpotent(prods, p).all():
            members.append(coeffs[idx])
    if not members:
        return field.Zeros((k, 0))
    return fl.column_space(field(np.stack(members, axis=1)))


def is_nilpotent_ideal(mats: list[galois.FieldArray]) -> bool:
    """Power the span of ``mats`` until it vanishes or stops shrinking."""
    if not mats:
        return True
    field = type(mats[0])
    current = list(mats)
    previous = len(current) + 1
    while current:
        if len(current) >= previous:
            return False
        previous = len(current)
        products = [a @ b for a in mats for b in current]
        span = fl.column_space(field(_flatten(products).T))
        n = mats[0].shape[0]
        current = [span[:, c].reshape(n, n) for c in range(span.shape[1])]
    return True


def algebra_radical(basis, verify: bool = True, closed: bool = False) -> AlgebraRadical:
    """Radical of the algebra spanned by ``basis`` (independent matrices).

    ``closed=True`` skips the multiplicative-closure check for algebras known to be
    closed, such as endomorphism rings; ``verify=False`` skips the nilpotency check.
    """
    basis = list(basis)
    if not basis:
        return AlgebraRadical((), (), 0)
    if not closed:
        check_closed(basis)

    coords = _trace_method(basis)
    method = "trace"
    if verify:
        radical = _combine(basis, coords)
        if not is_nilpotent_ideal(radical):
            logger.warning("trace-form radical is not nilpotent; using brute force")
            coords = _brute_force(basis)
            method = "brute-force"
    radical = _combine(basis, coords)
    logger.debug("radical of a %d-dim algebra has dim %d (%s)", len(basis), len(radical), method)
    return AlgebraRadical(tuple(basis), tuple(radical), len(basis) - len(radical), method)


def brute_force_radical(basis) -> AlgebraRadical:
    basis = list(basis)
    radical = _combine(basis, _brute_force(basis))
    return AlgebraRadical(tuple(basis), tuple(radical), len(basis) - len(radical), "brute-force")


def _combine(basis: list[galois.FieldArray], coords: galois.FieldArray) -> list[galois.FieldArray]:
    field = type(basis[0])
    p = field.characteristic
    n = basis[0].shape[0]
    if coords.shape[1] == 0:
        return []
    flat = (fl.as_int(coords).T @ _flatten(basis)) % p
    return [field(row.reshape(n, n)) for row in flat]


def semisimple_quotient(rad: AlgebraRadical) -> SemisimpleQuotient:
    """Commutativity of algebra / radical and the fixed points of x -> x^p on it."""
    reps = rad.complement()
    if not reps:
        return SemisimpleQuotient(rad, True, ())
    field = type(reps[0])
    p = field.characteristic
    k = len(rad.radical_basis)
    s = len(reps)
    frame = rad._columns(list(rad.radical_basis) + list(reps))

    def classes(mats):
        sol = fl.solve_linear(frame, rad._columns(mats))
        if sol is None:
            raise NotClosedError("element outside the algebra")
        return sol[k:, :]

    commutators = [a @ b - b @ a for a, b in itertools.combinations(reps, 2)]
    if commutators and not fl.is_zero(classes(commutators)):
        return SemisimpleQuotient(rad, False, ())

    frobenius = classes([fl.matrix_power(r, p) for r in reps])
    fixed = fl.nullspace(frobenius - field.Identity(s))
    lifts = []
    for c in range(fixed.shape[1]):
        total = field.Zeros(reps[0].shape)
        for t in range(s):
            if fixed[t, c]:
                total = total + fixed[t, c] * reps[t]
        lifts.append(total)
    return SemisimpleQuotient(rad, True, tuple(lifts))
