import json

import pytest

from src.algcheck import periodicity, tensor_closure
from src.certificates import emit_certificate, read_certificate, verify_certificate, write_certificate
from src.config import Budgets, RunConfig
from src.errors import CertificateFormatError, GreenRingError
from src.formats import to_data
from src.modules import direct_sum


def test_closure_certificate_file(tmp_path, config, j0):
    cert = emit_certificate(j0, tensor_closure(j0, config), config)
    assert cert.kind == "closure"
    assert cert.config == config.echo()

    path = write_certificate(cert, tmp_path / "j0.cert.json")
    back = read_certificate(path)
    assert back == cert
    assert verify_certificate(back, config).ok


def test_periodicity_certificate_file(tmp_path, config, j0):
    cert = emit_certificate(j0, periodicity(j0, config), config)
    assert cert.kind == "periodicity"
    back = read_certificate(write_certificate(cert, tmp_path / "period.json"))
    assert verify_certificate(back, config).ok


def test_tampered_entry_fails_by_name(tmp_path, config, j0):
    path = write_certificate(emit_certificate(j0, tensor_closure(j0, config), config), tmp_path / "c.json")
    data = json.loads(path.read_text())
    data["closure"]["table"][0]["multiplicities"]["C0001"] = 2
    path.write_text(json.dumps(data))

    result = verify_certificate(read_certificate(path), config)
    assert not result.ok
    assert any(failure.startswith("entry C0001*C0001") for failure in result.failures)


def test_tampered_subject_fails(config, k, j0):
    cert = emit_certificate(k, tensor_closure(k, config), config)
    swapped = cert.model_copy(update={"subject": emit_certificate(j0, periodicity(j0, config)).subject})
    assert not verify_certificate(swapped, config).ok


@pytest.mark.slow
def test_nonalgebraic_certificate_for_another_subject_fails(config, omega1, j0):
    cert = emit_certificate(omega1, tensor_closure(omega1, config), config)
    assert cert.kind == "nonalgebraic"
    assert verify_certificate(cert, config).ok

    swapped = cert.model_copy(update={"subject": to_data(j0)})
    result = verify_certificate(swapped, config)
    assert not result.ok
    assert "subject: core differs from certificate base" in result.failures


def test_missing_payload_fails(config, j0):
    cert = emit_certificate(j0, tensor_closure(j0, config), config)
    result = verify_certificate(cert.model_copy(update={"closure": None}), config)
    assert result.failures == ["closure payload missing"]


def test_inconclusive_closures_have_no_certificate(k, j0):
    config = RunConfig(budgets=Budgets(max_steps=1))
    with pytest.raises(GreenRingError):
        emit_certificate(direct_sum(k, j0), tensor_closure(direct_sum(k, j0), config), config)


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "kind": "closure",\n  "subject": \n}')
    with pytest.raises(CertificateFormatError) as info:
        read_certificate(path)
    assert info.value.line == 4


def test_wrong_schema_names_the_field(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "guess", "subject": {"p": 3, "rank": 2, "dim": 0, "gens": [[], []]}}))
    with pytest.raises(CertificateFormatError, match="kind"):
        read_certificate(path)
