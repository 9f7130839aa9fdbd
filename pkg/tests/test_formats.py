import pytest

from src.errors import ModuleFormatError
from src.formats import from_data, load_module, read_module, save_module, to_data, write_module
from src.modules import is_isomorphic, validate

J0_TEXT = """p 3
rank 2
e 1
dim 3
gen 1
0 1 0
0 0 1
0 0 0
gen 2
0 0 0
0 0 0
0 0 0
"""

HEADER = "p 3\nrank 2\ndim 2\n"


def test_reads_the_induced_module(config, j0):
    m = read_module(J0_TEXT)
    assert m.dim == 3
    assert is_isomorphic(m, j0, config)
    assert write_module(m) == J0_TEXT


def test_comments_and_blank_lines_are_ignored(j0):
    text = "# (J, 0)\n\np 3   # prime\nrank 2\ndim 3\n\ngen 1\n0 1 0\n0 0 1\n0 0 0\ngen 2\n" + "0 0 0\n" * 3
    assert write_module(read_module(text)) == write_module(j0)


def test_file_round_trip(tmp_path, omega1):
    path = save_module(omega1, tmp_path / "omega1.mod")
    back = load_module(path)
    assert back.dim == 8
    assert to_data(back) == to_data(omega1)


def test_record_round_trip(top_one):
    assert to_data(from_data(to_data(top_one))) == to_data(top_one)


@pytest.mark.parametrize(
    "text, line, column, message",
    [
        (HEADER + "gen 1\n0 1\n0 x\n", 6, 3, "expected an integer"),
        (HEADER + "gen 1\n0 3\n", 5, 3, "not a residue mod 3"),
        (HEADER + "gen 2\n", 4, 5, "expected gen 1"),
        (HEADER + "gen 1\n0 1 0\n", 5, 1, "row has 3 entries"),
        (HEADER + "gen 1\n0 1\ngen 2\n", 6, 1, "gen 1 has 1 rows"),
        ("rank 2\ndim 2\ngen 1\n", 3, 1, "missing header 'p'"),
        ("p 3\np 3\n", 2, 1, "duplicate header"),
        (HEADER + "foo\n", 4, 1, "unexpected token"),
        (HEADER + "gen 1\n0 1\n0 0\ngen 2\n0 0\n0 0\ngen 3\n", 10, 5, "exceeds rank"),
    ],
)
def test_parse_errors_report_line_and_column(text, line, column, message):
    with pytest.raises(ModuleFormatError, match=message) as info:
        read_module(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_extension_degree_must_be_one():
    with pytest.raises(ModuleFormatError, match="e = 1"):
        read_module(J0_TEXT.replace("e 1", "e 2"))


def test_missing_generators_are_reported():
    with pytest.raises(ModuleFormatError, match="expected 2 generators, found 1"):
        read_module(HEADER + "gen 1\n0 1\n0 0\n")


def test_invalid_modules_are_rejected_unless_unchecked():
    # the generators do not commute
    text = HEADER + "gen 1\n0 1\n0 0\ngen 2\n0 0\n1 0\n"
    with pytest.raises(ModuleFormatError):
        read_module(text)
    m = read_module(text, check=False)
    assert validate(m)
