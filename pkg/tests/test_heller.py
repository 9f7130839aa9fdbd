import numpy as np
import pytest

from src.decomp import is_indecomposable, strip_projectives
from src.errors import InvalidModuleError
from src.heller import omega, omega_inverse, omega_n, projective_cover
from src.modules import direct_sum, dual, is_isomorphic, tensor, zero_module


def test_heller_dimensions_of_trivial(k, config):
    assert [omega_n(k, n, config).dim for n in range(5)] == [1, 8, 10, 17, 19]
    assert [omega_n(k, -n, config).dim for n in range(3)] == [1, 8, 10]


def test_projective_cover(k, j0, top_one):
    cover = projective_cover(j0)
    assert cover.cover_rank == 1 and cover.kernel.dim == 6
    assert cover.is_minimal()
    assert projective_cover(top_one).kernel.dim == 6
    assert projective_cover(dual(top_one)).cover_rank == 2
    with pytest.raises(InvalidModuleError):
        projective_cover(zero_module(k.group, k.field))


def test_omega_of_projective_is_zero(kg, config):
    assert omega(kg, config).dim == 0
    assert omega_n(direct_sum(kg, kg), 3, config).dim == 0


def test_omega_inverse_undoes_omega(j0, top_one, config):
    for m in (j0, top_one):
        assert is_isomorphic(omega_inverse(omega(m, config), config), m)
        assert is_isomorphic(omega(omega_inverse(m, config), config), m)


def test_omega_ignores_projective_summands(j0, kg, config):
    assert is_isomorphic(omega(direct_sum(j0, kg), config), omega(j0, config))


def test_omega_of_indecomposable_stays_indecomposable(top_one, config):
    assert is_indecomposable(omega(top_one, config), config)


def test_omega_dual(top_one, config):
    assert is_isomorphic(omega_n(dual(top_one), -1, config), dual(omega(top_one, config)))


def test_periodic_translate(j0, config):
    assert omega(j0, config).dim == 6
    assert is_isomorphic(omega_n(j0, 2, config), j0)


@pytest.mark.slow
def test_omega_tensor_identity(config):
    """strip(Omega(M (x) N)) = strip(Omega(M) (x) N) on seeded random pairs."""
    from tests.conftest import random_modules

    modules = random_modules(3, 4, 100, np.random.default_rng(11))
    for m, n in zip(modules[::2], modules[1::2]):
        left = omega(tensor(m, n), config)
        right, _ = strip_projectives(tensor(omega(m, config), n), config)
        assert is_isomorphic(left, right, config)


@pytest.mark.parametrize("n", [-2, -1, 1, 2])
def test_omega_commutes_with_duality(request, n, config):
    for name in ("k", "j0", "j_jsq", "top_one"):
        m = request.getfixturevalue(name)
        assert is_isomorphic(omega_n(dual(m), n, config), dual(omega_n(m, -n, config)), config)


@pytest.mark.parametrize("name", ["k", "j0", "j_jsq"])
def test_periodicity_is_invariant_under_omega(request, name, config):
    from src.algcheck.rankvariety import periodicity

    m = request.getfixturevalue(name)
    verdict = periodicity(m, config).verdict
    for n in (-1, 1, 2):
        assert periodicity(omega_n(m, n, config), config).verdict == verdict


@pytest.mark.slow
@pytest.mark.parametrize("i", [-2, -1, 0, 1, 2])
@pytest.mark.parametrize("j", [-2, -1, 0, 1, 2])
def test_omega_lattice_identity(i, j, k, j_jsq, config):
    """strip(Omega^i M (x) Omega^j N) = Omega^(i+j)(M (x) N)."""
    left, _ = strip_projectives(tensor(omega_n(k, i, config), omega_n(j_jsq, j, config)), config)
    right, _ = strip_projectives(omega_n(tensor(k, j_jsq), i + j, config), config)
    assert left.dim == right.dim
    assert is_isomorphic(left, right, config)
