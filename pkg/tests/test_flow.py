import pytest

from flow import HarnessPipeline
from src.config import load_stages


def test_pipeline_needs_exactly_one_input(config, k):
    with pytest.raises(ValueError):
        HarnessPipeline(config)
    with pytest.raises(ValueError):
        HarnessPipeline(config, census={"p": 3, "dim": 2}, modules=[("k", k)])


def test_pipeline_on_modules(tmp_path, config, k, j0):
    pipeline = HarnessPipeline(config, modules=[("k", k), ("j0", j0)])
    report = pipeline.kickoff(report_file=tmp_path / "report.md")
    assert [row.label for row in report.rows] == ["k", "j0"]
    assert pipeline.state["census"] is None
    assert all(v.algebraic for v in pipeline.state["translates"]["j0"])

    text = (tmp_path / "report.md").read_text()
    assert "**Census:**" not in text
    assert "- k: x**2 - x, 1 classes" in text
    assert "- j0: x**2 - 3*x, 1 classes" in text
    assert "- Counterexamples: none" in text


@pytest.mark.slow
def test_pipeline_on_a_census(tmp_path, config):
    pipeline = HarnessPipeline(config, census={"p": 3, "dim": 2})
    report = pipeline.kickoff(report_file=tmp_path / "report.md")
    census = pipeline.state["census"]
    assert len(report.rows) == census.indecomposable_count == 4
    assert all(c.algebraic is not None for c in census.classes)
    assert not any(row.in_scope for row in report.rows)
    assert "**Census:**" in (tmp_path / "report.md").read_text()


def test_stages_run_in_listener_order(tmp_path, config, k):
    pipeline = HarnessPipeline(config, modules=[("k", k)])
    pipeline.kickoff(report_file=tmp_path / "report.md")
    assert pipeline.state["stages"] == list(load_stages())
    assert HarnessPipeline.harness_stage.stage_trigger == "census_stage"
    assert HarnessPipeline.report_writing_stage.stage_trigger == "harness_stage"
    assert pipeline.state["report_file"] == tmp_path / "report.md"
