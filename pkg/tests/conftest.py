import numpy as np
import pytest

from src import fields as fl
from src.config import RunConfig
from src.heller import omega
from src.modules import GroupSpec, from_rows, regular_module, trivial_module

J3 = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
Z3 = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
J3_SQUARED = [[0, 0, 1], [0, 0, 0], [0, 0, 0]]


@pytest.fixture
def config():
    return RunConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def GF3():
    return fl.gf(fl.prime_field(3))


@pytest.fixture
def group():
    return GroupSpec(p=3, rank=2)


@pytest.fixture
def field():
    return fl.prime_field(3)


@pytest.fixture
def J(GF3):
    return GF3(J3)


@pytest.fixture
def k(group, field):
    return trivial_module(group, field)


@pytest.fixture
def kg(group, field):
    return regular_module(group, field)


@pytest.fixture
def j0():
    """(J, 0): induced from the trivial module of the second factor."""
    return from_rows([J3, Z3], 3)


@pytest.fixture
def zero_j():
    return from_rows([Z3, J3], 3)


@pytest.fixture
def j_jsq():
    """(J, J^2): uniserial, a twist of (J, 0) by an algebra automorphism."""
    return from_rows([J3, J3_SQUARED], 3)


@pytest.fixture
def top_one():
    """KG / rad^2: top k, socle k^2."""
    return from_rows([[[0, 0, 0], [1, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 0, 0], [1, 0, 0]]], 3)


@pytest.fixture
def omega1(k, config):
    return omega(k, config)


def random_modules(p, max_dim, count, rng):
    """Seeded random modules for C_p x C_p of dim 1..max_dim, in a random basis."""
    from src.census import _centralizer, _nilpotent_mask, jordan_matrix, partitions

    GF = fl.gf(fl.prime_field(p))
    out = []
    while len(out) < count:
        d = int(rng.integers(1, max_dim + 1))
        types = partitions(d, p)
        a1 = jordan_matrix(types[int(rng.integers(len(types)))])
        basis = _centralizer(a1, p)
        while True:
            coeffs = rng.integers(0, p, size=basis.shape[0])
            a2 = np.einsum("c,cij->ij", coeffs, basis) % p
            if _nilpotent_mask(a2[None], p)[0]:
                break
        while True:
            P = fl.random_matrix(GF, d, d, rng)
            if fl.rank(P) == d:
                break
        m = from_rows([a1, a2], p)
        out.append(m.conjugate(P))
    return out
