"""Self-contained certificate files and their offline verification."""

from __future__ import annotations

import json
import logging
from pathlib import Path

from pydantic import ValidationError

from src.algcheck.closure import verify_closure_certificate, verify_nonalgebraic_certificate
from src.algcheck.rankvariety import verify_periodicity
from src.config import DEFAULT_CONFIG, RunConfig
from src.decomp import strip_projectives
from src.errors import CertificateFormatError, GreenRingError
from src.formats import from_data, to_data
from src.modules import Module, is_isomorphic
from src.output_pydantic import CertificateFile, ClosureResult, ModuleData, PeriodicityReport, VerificationResult

logger = logging.getLogger(__name__)


def emit_certificate(subject: Module, verdict: ClosureResult | PeriodicityReport, config: RunConfig = DEFAULT_CONFIG) -> CertificateFile:
    """Certificate embedding every module it refers to."""
    if isinstance(verdict, PeriodicityReport):
        return CertificateFile(kind="periodicity", subject=to_data(subject), config=config.echo(), periodicity=verdict)
    if verdict.verdict == "Algebraic":
        return CertificateFile(kind="closure", subject=to_data(subject), config=config.echo(), closure=verdict.certificate)
    if verdict.verdict == "NonAlgebraic":
        return CertificateFile(
            kind="nonalgebraic", subject=to_data(subject), config=config.echo(), nonalgebraic=verdict.nonalgebraic
        )
    raise GreenRingError("an Inconclusive closure has no certificate")


def write_certificate(cert: CertificateFile, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(cert.model_dump_json(indent=2))
    return path


def read_certificate(path: str | Path) -> CertificateFile:
    text = Path(path).read_text()
    try:
        return CertificateFile.model_validate_json(text)
    except ValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(part) for part in error["loc"])
        line = column = None
        if error["type"] == "json_invalid":
            try:
                json.loads(text)
            except json.JSONDecodeError as decode:
                line, column = decode.lineno, decode.colno
        raise CertificateFormatError(f"{where}: {error['msg']}" if where else error["msg"], line, column) from exc


def _same_core(subject: Module, base: ModuleData, config: RunConfig) -> bool:
    """The projective-free cores of the subject and of the recorded base agree."""
    try:
        base_module = from_data(base)
    except GreenRingError:
        return False
    core, _ = strip_projectives(subject, config)
    base_core, _ = strip_projectives(base_module, config)
    return core.dim == base_core.dim and is_isomorphic(core, base_core, config)


def verify_certificate(cert: CertificateFile, config: RunConfig = DEFAULT_CONFIG) -> VerificationResult:
    """Re-check a certificate from scratch, without any registry."""
    try:
        subject = from_data(cert.subject)
    except GreenRingError as exc:
        return VerificationResult(ok=False, failures=[f"subject: {exc}"])

    if cert.kind == "closure":
        if cert.closure is None:
            return VerificationResult(ok=False, failures=["closure payload missing"])
        result = verify_closure_certificate(cert.closure, config, subject)
    elif cert.kind == "nonalgebraic":
        if cert.nonalgebraic is None:
            return VerificationResult(ok=False, failures=["nonalgebraic payload missing"])
        result = verify_nonalgebraic_certificate(cert.nonalgebraic, config)
        if not _same_core(subject, cert.nonalgebraic.base, config):
            result = VerificationResult(ok=False, failures=["subject: core differs from certificate base", *result.failures])
    else:
        if cert.periodicity is None:
            return VerificationResult(ok=False, failures=["periodicity payload missing"])
        result = verify_periodicity(subject, cert.periodicity, config)
    logger.info("%s certificate: %s", cert.kind, "ok" if result.ok else f"{len(result.failures)} failures")
    return result
