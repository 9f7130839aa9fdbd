"""Periodicity against algebraicity, row by row."""

from __future__ import annotations

import logging

from src.algcheck.closure import tensor_closure
from src.algcheck.rankvariety import periodicity
from src.config import DEFAULT_CONFIG, RunConfig
from src.decomp import is_absolutely_indecomposable, is_indecomposable
from src.errors import InvalidModuleError
from src.modules import Module, validate
from src.output_pydantic import ClosureResult, HarnessReport, HarnessRow, PeriodicityReport

logger = logging.getLogger(__name__)

RESEED_OFFSETS = (1, 2)


def _periodicity(m: Module, config: RunConfig) -> PeriodicityReport:
    if m.group.rank != 2:
        return PeriodicityReport(verdict="Unknown", note="periodicity is decided for rank-2 groups only")
    if not is_indecomposable(m, config):
        return PeriodicityReport(verdict="Unknown", note="decomposable input")
    return periodicity(m, config)


def contradicts(report: PeriodicityReport, closure: ClosureResult) -> bool:
    """Periodic but non-algebraic, or non-periodic but algebraic."""
    return (report.verdict == "Periodic" and closure.verdict == "NonAlgebraic") or (
        report.verdict == "NonPeriodic" and closure.verdict == "Algebraic"
    )


def _reverified(m: Module, config: RunConfig) -> bool:
    """The contradiction survives reruns under shifted seeds."""
    for offset in RESEED_OFFSETS:
        reseeded = config.with_seed((config.seed + offset) % 2**64)
        if not contradicts(_periodicity(m, reseeded), tensor_closure(m, reseeded)):
            return False
    return True


def conjecture_harness(modules, config: RunConfig = DEFAULT_CONFIG) -> HarnessReport:
    """``modules`` is a list of (label, Module).

    Every input is validated before any row is computed; the first invalid one raises
    ``InvalidModuleError`` naming its label and violation.
    """
    modules = list(modules)
    for label, m in modules:
        problems = validate(m)
        if problems:
            raise InvalidModuleError(f"{label}: {problems[0]}")
    rows: list[HarnessRow] = []
    confirmed: list[str] = []
    discarded: list[str] = []
    for label, m in modules:
        logger.info("harness row %s (dim %d)", label, m.dim)
        absolutely = m.dim > 0 and is_absolutely_indecomposable(m, config)
        in_scope = absolutely and m.dim % m.p == 0
        report = _periodicity(m, config)
        closure = tensor_closure(m, config)
        counterexample = False
        if in_scope and contradicts(report, closure):
            logger.warning("row %s contradicts the conjecture; re-verifying", label)
            if _reverified(m, config):
                counterexample = True
                confirmed.append(label)
            else:
                discarded.append(label)
        rows.append(
            HarnessRow(
                label=label,
                dim=m.dim,
                in_scope=in_scope,
                absolutely_indecomposable=absolutely,
                periodicity=report,
                closure=closure,
                counterexample=counterexample,
            )
        )

    return HarnessReport(
        rows=rows,
        periodic_algebraic=sum(r.periodicity.verdict == "Periodic" and r.closure.verdict == "Algebraic" for r in rows),
        nonperiodic_nonalgebraic=sum(
            r.periodicity.verdict == "NonPeriodic" and r.closure.verdict == "NonAlgebraic" for r in rows
        ),
        projective=sum(r.periodicity.verdict == "Projective" for r in rows),
        inconclusive=sum(r.periodicity.verdict == "Unknown" or r.closure.verdict == "Inconclusive" for r in rows),
        counterexamples=confirmed,
        discarded_candidates=discarded,
        config=config.echo(),
    )
