"""
Periodicity and complexity for modules of C_p x C_p.

A module is free on the shifted cyclic subgroup <1 + l1 A1 + l2 A2> exactly when
(l1 A1 + l2 A2)^(p-1) has rank dim / p. Lines where this fails make up the rank
variety: empty for projectives, finitely many lines for periodic modules and the
whole projective line for complexity 2.
"""

from __future__ import annotations

import logging

import numpy as np

from src import fields as fl
from src.config import DEFAULT_CONFIG, RunConfig
from src.decomp import is_indecomposable, strip_projectives
from src.errors import FieldError, InvalidModuleError, UnsupportedError
from src.fields import FieldSpec
from src.formats import matrix_rows
from src.heller import omega_n
from src.modules import Module, find_isomorphism, is_module_iso
from src.output_pydantic import LineSample, PeriodicityReport, VerificationResult

logger = logging.getLogger(__name__)

SAMPLING_ASSUMPTION = (
    "non-periodic when more than dim M lines are non-free: the rank variety of a "
    "periodic module is cut out in degree at most dim M"
)


def sampling_degree(p: int, dim: int) -> int:
    """Smallest e with p^e + 1 > dim."""
    e = 1
    while p**e + 1 <= dim:
        e += 1
    return e


def projective_line(field: FieldSpec) -> list[tuple[int, int]]:
    """Points of P^1 over the field as integer pairs: (1, t) for every t, then (0, 1)."""
    return [(1, t) for t in range(field.order)] + [(0, 1)]


def shifted_unit_free_test(m: Module, point, field: FieldSpec | None = None) -> bool:
    """Whether m restricts freely to the shifted subgroup in direction ``point``."""
    if m.group.rank != 2:
        raise UnsupportedError("shifted-unit tests need a rank-2 group")
    field = field or m.field
    if field.p != m.p:
        raise FieldError(f"{field} has the wrong characteristic for GF({m.p})")
    l1, l2 = (int(x) for x in point)
    if not (l1 or l2):
        raise FieldError("the zero point defines no shifted subgroup")
    if m.dim % m.p:
        return False
    GF = fl.gf(field)
    a1, a2 = (fl.extend_scalars(a, field) for a in m.gens)
    u = GF(l1) * a1 + GF(l2) * a2
    return fl.rank(fl.matrix_power(u, m.p - 1)) == m.dim // m.p


def sample_lines(m: Module, degree: int | None = None) -> tuple[int, list[LineSample]]:
    degree = degree or sampling_degree(m.p, m.dim)
    field = fl.extension_field(m.p, degree)
    samples = [LineSample(point=list(pt), free=shifted_unit_free_test(m, pt, field)) for pt in projective_line(field)]
    return degree, samples


def periodicity(m: Module, config: RunConfig = DEFAULT_CONFIG) -> PeriodicityReport:
    if m.group.rank != 2:
        raise UnsupportedError("periodicity is decided for rank-2 groups only")
    if m.dim == 0 or not is_indecomposable(m, config):
        raise InvalidModuleError("periodicity needs an indecomposable module")

    core, _ = strip_projectives(m, config)
    if core.dim == 0:
        return PeriodicityReport(verdict="Projective", complexity=0)

    for period in (1, 2):
        translate = omega_n(core, period, config)
        phi = find_isomorphism(translate, core, config)
        if phi is not None:
            logger.debug("dim %d module has period %d", m.dim, period)
            return PeriodicityReport(verdict="Periodic", period=period, complexity=1, witness=matrix_rows(phi))

    degree, lines = sample_lines(core)
    nonfree = sum(not line.free for line in lines)
    if nonfree == len(lines) and nonfree > core.dim:
        return PeriodicityReport(
            verdict="NonPeriodic",
            complexity=2,
            sampling_degree=degree,
            lines=lines,
            assumption=SAMPLING_ASSUMPTION,
        )
    logger.warning("dim %d module: %d of %d lines non-free but no period found", m.dim, nonfree, len(lines))
    return PeriodicityReport(
        verdict="Unknown",
        complexity=1,
        sampling_degree=degree,
        lines=lines,
        note="free lines were found but no Omega^1 or Omega^2 isomorphism; flagged for manual review",
    )


def verify_periodicity(m: Module, report: PeriodicityReport, config: RunConfig = DEFAULT_CONFIG) -> VerificationResult:
    """Re-check a periodicity report against its module."""
    failures: list[str] = []
    core, _ = strip_projectives(m, config)
    if report.verdict == "Projective":
        if core.dim:
            failures.append(f"projective-free core has dim {core.dim}")
    elif report.verdict == "Periodic":
        if report.period not in (1, 2) or report.witness is None:
            failures.append("periodic report without period and witness")
        else:
            translate = omega_n(core, report.period, config)
            witness = np.asarray(report.witness, dtype=np.int64) % m.p
            if witness.shape != (core.dim, translate.dim) or not is_module_iso(core.gf(witness), translate, core):
                failures.append(f"witness is not an isomorphism Omega^{report.period}(M) -> M")
    elif report.verdict == "NonPeriodic":
        degree, lines = sample_lines(core, report.sampling_degree)
        recorded = {tuple(line.point): line.free for line in report.lines}
        for line in lines:
            if recorded.get(tuple(line.point)) != line.free:
                failures.append(f"line {line.point}: recorded {recorded.get(tuple(line.point))}, recomputed {line.free}")
        if any(line.free for line in lines) or len(lines) <= core.dim:
            failures.append("line sample does not certify non-periodicity")
    return VerificationResult(ok=not failures, failures=failures)
