import pytest

from src.arquiver import (
    Signature,
    algebraic_positions,
    diamond_check,
    formula_grid,
    propagate,
    read_grid,
    reorigin,
    shift_grid,
    signature_formula,
    signatures_from_restriction,
    write_grid,
)
from src.errors import ModuleFormatError, SignatureInconsistencyError
from src.modules import SubgroupSpec, direct_sum

SEEDS = [
    Signature.of("x"),
    Signature.of("x", "y"),
    Signature.of("x", "y", "z"),
    Signature([("x", 0), ("y", 1)]),
]


@pytest.mark.parametrize("seed", SEEDS, ids=str)
def test_propagation_matches_closed_formula(seed):
    grid = propagate(seed, (-6, 6), 6)
    expected = formula_grid(seed, (-6, 6), 6)
    for ij in expected.cells:
        assert grid[ij] == expected[ij], ij


@pytest.mark.parametrize("seed", SEEDS, ids=str)
def test_diamond_relation_holds(seed):
    assert diamond_check(propagate(seed, (-4, 4), 5)) is None
    assert diamond_check(formula_grid(seed, (-4, 4), 5)) is None


def test_row_sizes_grow_linearly():
    seed = Signature.of("x", "y")
    grid = propagate(seed, (0, 0), 4)
    assert [len(grid[(0, j)]) for j in range(5)] == [2, 4, 6, 8, 10]


def test_signature_formula_small_cells():
    x = Signature.of("x")
    assert signature_formula(0, 0, x) == x
    assert signature_formula(2, 1, x) == Signature([("x", 1), ("x", 3)])
    assert signature_formula(0, 2, x) == Signature([("x", -2), ("x", 0), ("x", 2)])
    with pytest.raises(ValueError):
        signature_formula(0, -1, x)


def test_tampered_grid_is_reported():
    grid = propagate(Signature.of("x"), (-3, 3), 3)
    grid.cells[(0, 2)] = grid.cells[(0, 2)] + Signature.of("x")
    failure = diamond_check(grid)
    assert failure is not None
    assert (failure.i, failure.j) in {(0, 1), (0, 3), (-1, 2), (1, 2)}
    assert failure.top_plus_bottom != failure.left_plus_right


def test_algebraic_positions_stay_on_the_bottom_row():
    grid = propagate(Signature.of("x", "y"), (-5, 5), 5)
    positions = algebraic_positions(grid)
    assert positions == {(i, 0) for i in range(-5, 6)}
    assert algebraic_positions(grid, designated=0) == {(0, 0)}


def test_algebraic_positions_reject_mixed_seed_shifts():
    grid = propagate(Signature([("x", 0), ("y", 1)]), (-2, 2), 2)
    assert algebraic_positions(grid, designated=0) == set()
    assert algebraic_positions(grid, designated=1) == set()
    assert (0, 0) in algebraic_positions(grid)


def test_empty_seed_is_rejected():
    with pytest.raises(SignatureInconsistencyError):
        propagate(Signature(), (0, 2), 2)


def test_subtraction_never_goes_negative():
    x, y = Signature.of("x"), Signature.of("y")
    assert (x + y) - y == x
    with pytest.raises(SignatureInconsistencyError, match="x\\^0"):
        y - x


def test_shift_and_reorigin_describe_the_same_component():
    seed = Signature.of("x", "y")
    grid = propagate(seed, (-3, 3), 3)

    shifted = shift_grid(grid, 2)
    assert shifted[(1, 2)] == grid[(1, 2)].shifted(2)
    assert diamond_check(shifted) is None

    moved = reorigin(grid, 2)
    assert moved.i_range == (-5, 1)
    assert moved[(0, 0)] == grid[(2, 0)]
    assert moved.row0 == seed.shifted(2)
    expected = formula_grid(moved.row0, moved.i_range, moved.j_max)
    assert all(moved[ij] == expected[ij] for ij in expected.cells)


def test_grid_file_round_trip():
    grid = propagate(Signature.of("x", "y"), (-2, 2), 3)
    back = read_grid(write_grid(grid))
    assert back.i_range == grid.i_range
    assert back.j_max == grid.j_max
    assert back.row0 == grid.row0
    assert back.cells == grid.cells


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("0 0 x^0\n1 0 y\n", 2, 5),
        ("0 a x^0\n", 1, 3),
        ("0 0 x^0\n0 0 x^0\n", 2, 1),
        ("# nothing\n", 1, None),
    ],
)
def test_grid_parse_errors_carry_positions(text, line, column):
    with pytest.raises(ModuleFormatError) as info:
        read_grid(text)
    assert info.value.line == line
    assert info.value.column == column


def test_cyclic_restrictions_carry_no_symbols(config, group, k, j0):
    # every module for a cyclic group is periodic
    line = SubgroupSpec(group=group, basis=((1, 0),))
    assert signatures_from_restriction(k, line, config) == Signature()
    assert signatures_from_restriction(j0, line, config) == Signature()


def test_translates_share_a_symbol(config, group, k, kg, omega1):
    whole = SubgroupSpec(group=group, basis=((1, 0), (0, 1)))
    assert signatures_from_restriction(direct_sum(k, kg), whole, config) == Signature.of("x1")

    sig = signatures_from_restriction(direct_sum(k, omega1), whole, config)
    assert len(sig) == 2
    assert set(sig.shifts()) == {"x1"}
    assert sorted(sig.shifts()["x1"]) in ([0, 1], [-1, 0])
