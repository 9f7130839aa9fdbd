import pytest

from src import fields as fl
from src.algcheck.rankvariety import (
    periodicity,
    projective_line,
    sample_lines,
    sampling_degree,
    shifted_unit_free_test,
    verify_periodicity,
)
from src.errors import FieldError, InvalidModuleError, UnsupportedError
from src.modules import direct_sum, from_rows


@pytest.mark.parametrize("p, dim, e", [(3, 1, 1), (3, 3, 1), (3, 4, 2), (3, 8, 2), (3, 10, 3), (2, 3, 2), (5, 6, 2)])
def test_sampling_degree_sees_more_lines_than_the_dimension(p, dim, e):
    assert sampling_degree(p, dim) == e
    assert p**e + 1 > dim


def test_projective_line_points(field):
    assert projective_line(field) == [(1, 0), (1, 1), (1, 2), (0, 1)]
    assert len(projective_line(fl.extension_field(3, 2))) == 10


def test_shifted_unit_free_test(k, kg, j0):
    assert not shifted_unit_free_test(k, (1, 0))
    assert all(shifted_unit_free_test(kg, pt) for pt in [(1, 0), (0, 1), (1, 1), (1, 2)])
    # (J, 0) is free along every line except the kernel of the first generator
    assert shifted_unit_free_test(j0, (1, 0))
    assert shifted_unit_free_test(j0, (1, 2))
    assert not shifted_unit_free_test(j0, (0, 1))


def test_shifted_unit_free_test_over_an_extension(j0):
    field = fl.extension_field(3, 2)
    _, lines = sample_lines(j0, 2)
    assert len(lines) == field.order + 1
    assert [line.point for line in lines if not line.free] == [[0, 1]]


def test_shifted_unit_free_test_errors(k, j0):
    with pytest.raises(FieldError):
        shifted_unit_free_test(j0, (0, 0))
    with pytest.raises(FieldError):
        shifted_unit_free_test(j0, (1, 0), fl.prime_field(5))
    cyclic = from_rows([[[0, 1, 0], [0, 0, 1], [0, 0, 0]]], 3)
    with pytest.raises(UnsupportedError):
        shifted_unit_free_test(cyclic, (1, 0))


def test_trivial_module_is_not_periodic(config, k):
    report = periodicity(k, config)
    assert report.verdict == "NonPeriodic"
    assert report.complexity == 2
    assert report.sampling_degree == 1
    assert len(report.lines) == 4
    assert not any(line.free for line in report.lines)
    assert report.assumption


def test_induced_module_has_period_two(config, j0):
    report = periodicity(j0, config)
    assert report.verdict == "Periodic"
    assert report.period == 2
    assert report.complexity == 1
    assert len(report.witness) == 3


def test_regular_module_is_projective(config, kg):
    report = periodicity(kg, config)
    assert report.verdict == "Projective"
    assert report.complexity == 0


@pytest.mark.slow
def test_heller_translate_of_trivial_is_not_periodic(config, omega1):
    report = periodicity(omega1, config)
    assert report.verdict == "NonPeriodic"
    assert report.sampling_degree == 2
    assert len(report.lines) == 10


def test_periodicity_rejects_decomposable_and_cyclic_inputs(config, k, j0):
    with pytest.raises(InvalidModuleError):
        periodicity(direct_sum(k, j0), config)
    cyclic = from_rows([[[0, 1], [0, 0]]], 2)
    with pytest.raises(UnsupportedError):
        periodicity(cyclic, config)


@pytest.mark.parametrize("name", ["k", "kg", "j0"])
def test_reports_verify(request, config, name):
    m = request.getfixturevalue(name)
    report = periodicity(m, config)
    assert verify_periodicity(m, report, config).ok


def test_tampered_reports_fail(config, k, j0):
    report = periodicity(k, config)
    lines = [line.model_copy(update={"free": True}) if i == 0 else line for i, line in enumerate(report.lines)]
    result = verify_periodicity(k, report.model_copy(update={"lines": lines}), config)
    assert not result.ok
    assert "line [1, 0]" in result.failures[0]

    periodic = periodicity(j0, config)
    assert not verify_periodicity(k, periodic, config).ok
