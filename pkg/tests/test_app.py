import json

import pytest

from app import EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, main
from src.config import CACHE_ENV
from src.formats import load_module, save_module
from src.modules import direct_sum, tensor


@pytest.fixture(autouse=True)
def no_cache_env(monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)


@pytest.fixture
def files(tmp_path, k, j0):
    return {
        "k": str(save_module(k, tmp_path / "k.mod")),
        "j0": str(save_module(j0, tmp_path / "j0.mod")),
        "sum": str(save_module(direct_sum(k, j0), tmp_path / "sum.mod")),
    }


def test_validate(files, capsys):
    assert main(["validate", files["j0"]]) == EXIT_OK
    assert "ok: p=3 rank=2 dim=3" in capsys.readouterr().out


def test_validate_lists_violations(tmp_path, capsys):
    path = tmp_path / "bad.mod"
    path.write_text("p 3\nrank 2\ndim 2\ngen 1\n0 1\n0 0\ngen 2\n0 0\n1 0\n")
    assert main(["validate", str(path)]) == EXIT_INPUT
    assert "commutator nonzero for generators 1,2" in capsys.readouterr().out


def test_parse_errors_exit_with_one(tmp_path, capsys):
    path = tmp_path / "bad.mod"
    path.write_text("p 3\nrank 2\ndim 2\ngen 1\n0 z\n")
    assert main(["decompose", str(path)]) == EXIT_INPUT
    assert "error: line 5, column 3" in capsys.readouterr().err


def test_missing_file_exits_with_one(tmp_path):
    assert main(["dual", str(tmp_path / "nowhere.mod")]) == EXIT_INPUT


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == EXIT_INPUT
    assert main(["--help"]) == EXIT_OK


def test_omega_writes_the_translate(files, tmp_path, capsys):
    out = tmp_path / "omega3.mod"
    assert main(["omega", "-n", "3", files["k"], "--out", str(out)]) == EXIT_OK
    assert "dim 17 module written" in capsys.readouterr().out
    assert load_module(out).dim == 17


def test_decompose_reports_summands(tmp_path, j0, capsys):
    path = save_module(tensor(j0, j0), tmp_path / "square.mod")
    assert main(["decompose", str(path), "--out", str(tmp_path / "parts")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "dim 9 = 3x[dim 3]" in out
    assert "free rank 0" in out
    assert len(list((tmp_path / "parts").glob("*.mod"))) == 3


def test_restrict_prints_the_module(files, capsys):
    assert main(["restrict", files["j0"], "--basis", "1,0"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("p 3\nrank 1\n")


def test_periodicity(files, capsys):
    assert main(["periodicity", files["j0"]]) == EXIT_OK
    assert capsys.readouterr().out.startswith("Periodic; period 2")


def test_closure_and_certificate(files, tmp_path, capsys):
    cert = tmp_path / "k.cert.json"
    assert main(["closure", files["k"], "--out", str(cert), "--seed", "0x10"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Algebraic; classes: 1" in out
    assert "C0001·C0001 = C0001" in out
    assert "x**2 - x" in out

    assert main(["verify-cert", str(cert)]) == EXIT_OK
    assert "closure certificate verified" in capsys.readouterr().out

    data = json.loads(cert.read_text())
    data["closure"]["table"][0]["free_rank"] = 1
    cert.write_text(json.dumps(data))
    assert main(["verify-cert", str(cert)]) == EXIT_INPUT
    assert "FAILED entry C0001*C0001" in capsys.readouterr().out


def test_closure_budget_is_inconclusive(files, capsys):
    assert main(["closure", files["sum"], "--max-steps", "1"]) == EXIT_INCONCLUSIVE
    assert "Inconclusive; max_steps" in capsys.readouterr().out


def test_census(tmp_path, capsys):
    assert main(["census", "p=3", "dim=2", "--out", str(tmp_path / "census2")]) == EXIT_OK
    assert "5 in total" in capsys.readouterr().out
    assert (tmp_path / "census2" / "index.yaml").exists()
    assert main(["census", "p=3"]) == EXIT_INPUT


def test_harness_on_module_files(files, tmp_path, capsys):
    report = tmp_path / "report.md"
    assert main(["harness", files["k"], files["j0"], "--out", str(report)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "counterexamples: 0" in out
    text = report.read_text()
    assert text.startswith("# Harness Report")
    assert "| j0 | 3 | yes | Periodic | 1 | Algebraic | no |" in text


def test_harness_needs_inputs():
    assert main(["harness"]) == EXIT_INPUT


def test_quiver(tmp_path, capsys):
    grid = tmp_path / "grid.txt"
    assert main(["quiver", "x", "y", "--width", "3", "--height", "3", "--designated", "0", "--out", str(grid)]) == EXIT_OK
    assert "algebraic positions: [(0, 0)]" in capsys.readouterr().out

    assert main(["quiver", "--grid", str(grid)]) == EXIT_OK
    tampered = grid.read_text().replace("0 1 x^-1 x^1 y^-1 y^1", "0 1 x^-1 x^1 y^-1")
    grid.write_text(tampered)
    assert main(["quiver", "--grid", str(grid)]) == EXIT_INPUT
    assert "diamond at" in capsys.readouterr().out
