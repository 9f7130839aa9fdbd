import numpy as np
import pytest

from src import fields as fl
from src.errors import DimensionError, FieldError


def test_rank_examples(GF3, J):
    GF5 = fl.gf(fl.prime_field(5))
    assert fl.rank(GF3.Zeros((3, 3))) == 0
    assert fl.rank(GF5.Identity(4)) == 4
    assert fl.rank(J) == 2


def test_nullspace_examples(GF3, J):
    assert fl.nullspace(GF3.Identity(2)).shape == (2, 0)
    assert fl.rank(fl.nullspace(GF3.Zeros((2, 2)))) == 2
    kernel = fl.nullspace(J)
    assert kernel.shape == (3, 1)
    assert fl.is_zero(J @ kernel)
    assert fl.rank(fl.hstack(GF3, [kernel, fl.matrix_power(J, 2)])) == 1


def test_rank_nullity(GF3, rng):
    for _ in range(20):
        rows, cols = rng.integers(1, 6, size=2)
        m = fl.random_matrix(GF3, int(rows), int(cols), rng)
        kernel = fl.nullspace(m)
        assert fl.rank(m) + kernel.shape[1] == cols
        assert fl.is_zero(m @ kernel)
        assert fl.rank(kernel) == kernel.shape[1]


def test_kron_examples(GF3, rng):
    assert np.array_equal(fl.kron(GF3.Identity(2), GF3.Identity(3)), GF3.Identity(6))
    for _ in range(10):
        a = fl.random_matrix(GF3, 3, 3, rng)
        b = fl.random_matrix(GF3, 3, 3, rng)
        assert fl.rank(fl.kron(a, b)) == fl.rank(a) * fl.rank(b)

    GF2 = fl.gf(fl.prime_field(2))
    j2 = GF2([[0, 1], [0, 0]])
    expected = GF2.Zeros((4, 4))
    expected[0, 3] = 1
    assert np.array_equal(fl.kron(j2, j2), expected)


def test_kron_associative(GF3, rng):
    a, b, c = (fl.random_matrix(GF3, 2, 3, rng) for _ in range(3))
    assert np.array_equal(fl.kron(fl.kron(a, b), c), fl.kron(a, fl.kron(b, c)))


def test_kron_mixed_product(GF3, rng):
    a, b = fl.random_matrix(GF3, 3, 3, rng), fl.random_matrix(GF3, 2, 2, rng)
    x, y = fl.random_matrix(GF3, 3, 1, rng), fl.random_matrix(GF3, 2, 1, rng)
    assert np.array_equal(fl.kron(a, b) @ fl.kron(x, y), fl.kron(a @ x, b @ y))


def test_solve_linear(GF3, J):
    rhs = GF3([[1], [2], [0]])
    assert np.array_equal(fl.solve_linear(GF3.Identity(3), rhs), rhs)
    assert fl.solve_linear(GF3.Zeros((3, 3)), rhs) is None
    x = fl.solve_linear(J, GF3([[1], [0], [0]]))
    assert np.array_equal(x, GF3([[0], [1], [0]]))
    with pytest.raises(DimensionError):
        fl.solve_linear(GF3.Identity(3), GF3.Zeros((2, 1)))


def test_inverse_and_singular(GF3, rng):
    m = GF3([[1, 1], [0, 1]])
    assert np.array_equal(fl.inverse(m) @ m, GF3.Identity(2))
    with pytest.raises(DimensionError):
        fl.inverse(GF3.Zeros((2, 2)))


def test_extend_scalars(GF3, J, rng):
    gf27 = fl.extension_field(3, 3)
    assert np.array_equal(fl.extend_scalars(GF3.Identity(3), gf27), fl.gf(gf27).Identity(3))
    assert fl.nullspace(fl.extend_scalars(J, gf27)).shape[1] == 1

    gf9 = fl.extension_field(3, 2)
    for _ in range(10):
        a, b = fl.random_matrix(GF3, 4, 4, rng), fl.random_matrix(GF3, 4, 4, rng)
        assert fl.rank(fl.extend_scalars(a, gf9)) == fl.rank(a)
        assert np.array_equal(fl.extend_scalars(a @ b, gf9), fl.extend_scalars(a, gf9) @ fl.extend_scalars(b, gf9))
        assert np.array_equal(fl.extend_scalars(a + b, gf9), fl.extend_scalars(a, gf9) + fl.extend_scalars(b, gf9))

    with pytest.raises(FieldError):
        fl.extend_scalars(J, fl.extension_field(5, 2))


@pytest.mark.parametrize("p,e", [(p, e) for p in (2, 3, 5) for e in (1, 2, 3)])
def test_field_axioms(p, e, rng):
    GF = fl.gf(fl.extension_field(p, e))
    x, y, z = (GF(rng.integers(0, GF.order, size=50)) for _ in range(3))
    assert np.array_equal((x * y) * z, x * (y * z))
    assert np.array_equal(x * (y + z), x * y + x * z)
    nonzero = x[x != 0]
    assert np.all(nonzero * nonzero**-1 == 1)


def test_field_spec_validation():
    with pytest.raises(FieldError):
        fl.prime_field(4)
    spec = fl.extension_field(3, 2)
    assert spec.modulus[0] == 1 and len(spec.modulus) == 3
    assert fl.extension_field(3, 2) == spec
    with pytest.raises(ValueError):
        fl.FieldSpec(p=3, e=2, modulus=(1, 0, 2))  # x^2 - 1 is reducible
