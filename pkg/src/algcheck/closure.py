"""
Budgeted tensor-closure test for algebraicity.

Starting from the indecomposable summands of the projective-free core of M, every
pair of known classes is tensored, stripped of free summands and decomposed; new
summands join the registry. A closed table is an algebraicity certificate. Each
new class found in M^n (n >= 2) is compared against the Heller translates of M and
M*; a match on a non-periodic M certifies non-algebraicity.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from src import fields as fl
from src.algcheck.rankvariety import periodicity
from src.algcheck.registry import IsoClassRegistry
from src.config import DEFAULT_CONFIG, RunConfig
from src.decomp import decompose, is_absolutely_indecomposable, is_indecomposable, strip_projectives, summand_witness
from src.errors import GreenRingError
from src.formats import from_data, matrix_rows, to_data
from src.heller import omega_n
from src.modules import Module, dual, find_isomorphism, is_isomorphic, is_module_iso, is_module_map, tensor, tensor_power
from src.output_pydantic import (
    ClosureCertificate,
    ClosureResult,
    NonAlgebraicCertificate,
    PeriodicityReport,
    SummandWitness,
    TableEntry,
    VerificationResult,
)

logger = logging.getLogger(__name__)


def shifts(window: int) -> list[int]:
    """1, -1, 2, -2, ... up to the window."""
    return [s * i for i in range(1, window + 1) for s in (1, -1)]


class TranslateCache:
    """Omega^i of M and of M*, computed one step at a time and kept."""

    def __init__(self, base: Module, config: RunConfig = DEFAULT_CONFIG):
        self.config = config
        self.base = base
        self._report: PeriodicityReport | None = None
        self._store: dict[tuple[str, int], Module] = {("M", 0): base, ("M*", 0): dual(base)}

    def get(self, direction: str, i: int) -> Module:
        key = (direction, i)
        if key not in self._store:
            step = 1 if i > 0 else -1
            previous = self.get(direction, i - step)
            self._store[key] = omega_n(previous, step, self.config)
        return self._store[key]

    def periodicity(self) -> PeriodicityReport:
        if self._report is None:
            self._report = periodicity(self.base, self.config)
        return self._report


def translate_scan(
    base: Module,
    found: Module,
    n: int,
    omega_window: int | None = None,
    config: RunConfig = DEFAULT_CONFIG,
    translates: TranslateCache | None = None,
    report: PeriodicityReport | None = None,
) -> NonAlgebraicCertificate | None:
    """Certificate that base is non-algebraic when ``found`` is a nonzero Omega-translate of base or base*."""
    if n < 2:
        return None
    window = omega_window or config.budgets.omega_window
    translates = translates or TranslateCache(base, config)
    for i in shifts(window):
        for direction in ("M", "M*"):
            target = translates.get(direction, i)
            if target.dim != found.dim:
                continue
            phi = find_isomorphism(found, target, config)
            if phi is None:
                continue
            logger.info("summand of M^%d matches Omega^%d(%s)", n, i, direction)
            if report is None:
                try:
                    report = translates.periodicity()
                except GreenRingError as exc:
                    logger.info("no periodicity verdict for the base: %s", exc)
                    return None
            if report.verdict != "NonPeriodic":
                logger.info("base is %s; the translate proves nothing", report.verdict)
                return None
            power = tensor_power(base, n)
            if power.dim > config.budgets.max_dim:
                logger.warning("M^%d has dim %d over max_dim; no witness built", n, power.dim)
                return None
            witness = summand_witness(found, power, config)
            if witness is None:
                logger.warning("translate did not split off M^%d", n)
                return None
            iota, pi = witness
            return NonAlgebraicCertificate(
                base=to_data(base),
                n=n,
                i=i,
                direction=direction,
                summand=to_data(found),
                witness=SummandWitness(inclusion=matrix_rows(iota), projection=matrix_rows(pi)),
                translate_iso=matrix_rows(phi),
                nonperiodicity=report,
            )
    return None


def _product(pair_modules: tuple[Module, Module], config: RunConfig) -> tuple[tuple[Module, ...], int]:
    left, right = pair_modules
    core, free = strip_projectives(tensor(left, right), config)
    return decompose(core, config).blocks, free


def _certificate(registry: IsoClassRegistry, base: Counter, table: dict) -> ClosureCertificate:
    return ClosureCertificate(
        classes=registry.labels,
        modules={label: to_data(entry.module) for label, entry in registry.entries.items()},
        base=list(base),
        base_multiplicities=dict(base),
        powers={label: entry.power for label, entry in registry.entries.items()},
        table=list(table.values()),
    )


def _annotate_periodicity(registry: IsoClassRegistry, translates: TranslateCache, config: RunConfig) -> None:
    """Periodicity verdict of every registered class, reusing the report of the closure input."""
    for entry in registry.entries.values():
        if entry.periodic is not None:
            continue
        try:
            if entry.module.digest == translates.base.digest:
                report = translates.periodicity()
            else:
                report = periodicity(entry.module, config)
            entry.periodic = report.verdict
        except GreenRingError as exc:
            logger.info("no periodicity verdict for %s: %s", entry.label, exc)
            entry.periodic = "Unknown"


def tensor_closure(
    m: Module,
    config: RunConfig = DEFAULT_CONFIG,
    cache_dir: str | Path | None = None,
) -> ClosureResult:
    budgets = config.budgets
    echo = config.echo()
    core, _ = strip_projectives(m, config)
    if core.dim == 0:
        empty = ClosureCertificate(classes=[], modules={}, base=[], powers={}, table=[])
        return ClosureResult(verdict="Algebraic", certificate=empty, config=echo)

    registry = IsoClassRegistry(config)
    blocks = decompose(core, config).blocks
    base: Counter = Counter()
    for block in blocks:
        label, _ = registry.admit(block, power=1, absolutely_indecomposable=is_absolutely_indecomposable(block, config))
        base[label] += 1
    absolutely = len(blocks) == 1 and is_absolutely_indecomposable(core, config)
    if not absolutely:
        logger.warning("closure input is not absolutely indecomposable")

    translates = TranslateCache(core, config)
    table: dict[tuple[str, str], TableEntry] = {}
    steps = 0

    def finish(verdict: str, **extra) -> ClosureResult:
        if cache_dir is not None:
            _annotate_periodicity(registry, translates, config)
            registry.save(Path(cache_dir) / core.digest)
        return ClosureResult(verdict=verdict, steps=steps, absolutely_indecomposable=absolutely, config=echo, **extra)

    def inconclusive(reason: str) -> ClosureResult:
        logger.warning("closure stopped: %s", reason)
        return finish("Inconclusive", progress=reason, partial=_certificate(registry, base, table))

    def scan(block: Module, power: int) -> NonAlgebraicCertificate | None:
        if power < 2:
            return None
        return translate_scan(core, block, power, budgets.omega_window, config, translates)

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        round_no = 0
        while True:
            labels = registry.labels
            pending = [(a, b) for i, a in enumerate(labels) for b in labels[i:] if (a, b) not in table]
            if not pending:
                break
            round_no += 1
            logger.info("closure round %d: %d classes, %d pending pairs", round_no, len(labels), len(pending))
            for start in range(0, len(pending), config.workers):
                chunk = pending[start : start + config.workers]
                jobs = {}
                for pair in chunk:
                    left, right = registry[pair[0]], registry[pair[1]]
                    if left.dim * right.dim <= budgets.max_dim:
                        jobs[pair] = pool.submit(_product, (left.module, right.module), config)

                for a, b in chunk:
                    if steps >= budgets.max_steps:
                        return inconclusive(f"max_steps budget of {budgets.max_steps} reached")
                    if (a, b) not in jobs:
                        return inconclusive(f"max_dim budget exceeded by {a}*{b}")
                    parts, free = jobs[(a, b)].result()
                    steps += 1
                    power = registry[a].power + registry[b].power
                    counts: Counter = Counter()
                    for block in parts:
                        label, new = registry.admit(
                            block, power=power, absolutely_indecomposable=is_absolutely_indecomposable(block, config)
                        )
                        counts[label] += 1
                        if not new:
                            continue
                        if len(registry) > budgets.max_classes:
                            return inconclusive(f"max_classes budget of {budgets.max_classes} reached")
                        cert = scan(block, power)
                        if cert is not None:
                            table[(a, b)] = TableEntry(left=a, right=b, multiplicities=dict(counts), free_rank=free)
                            return finish("NonAlgebraic", nonalgebraic=cert)
                    table[(a, b)] = TableEntry(left=a, right=b, multiplicities=dict(counts), free_rank=free)
                    logger.debug("%s*%s = %s + %d free", a, b, dict(counts), free)

    logger.info("closure is closed with %d classes after %d steps", len(registry), steps)
    return finish("Algebraic", certificate=_certificate(registry, base, table))


def _matrix(m: Module, rows, shape: tuple[int, int]):
    arr = np.asarray(rows, dtype=np.int64)
    if shape[0] * shape[1] == 0:
        arr = arr.reshape(shape) if arr.size == 0 else arr
    if arr.shape != shape:
        return None
    return m.gf(arr % m.p)


def verify_closure_certificate(
    cert: ClosureCertificate, config: RunConfig = DEFAULT_CONFIG, subject: Module | None = None
) -> VerificationResult:
    """Recompute every table entry and check the table is closed and balanced.

    With ``subject`` given, also check its core splits into the base classes.
    """
    failures: list[str] = []
    modules: dict[str, Module] = {}
    for label in cert.classes:
        if label not in cert.modules:
            failures.append(f"class {label}: module missing")
            continue
        try:
            modules[label] = from_data(cert.modules[label])
        except GreenRingError as exc:
            failures.append(f"class {label}: {exc}")
    for label in cert.base:
        if label not in cert.classes:
            failures.append(f"base class {label} is not listed")
    if subject is not None and not failures:
        core, _ = strip_projectives(subject, config)
        seen: Counter = Counter()
        for block in decompose(core, config).blocks:
            match = next(
                (label for label in cert.base if modules[label].dim == block.dim and is_isomorphic(block, modules[label], config)),
                None,
            )
            if match is None:
                failures.append(f"subject: a summand of dim {block.dim} is not among the base classes")
            else:
                seen[match] += 1
        if cert.base_multiplicities and not failures and dict(seen) != cert.base_multiplicities:
            failures.append("subject: base multiplicities do not match its summands")
    if failures:
        return VerificationResult(ok=False, failures=failures)

    entries = {}
    for entry in cert.table:
        entries[(entry.left, entry.right)] = entry
        entries.setdefault((entry.right, entry.left), entry)

    labels = list(cert.classes)
    for i, a in enumerate(labels):
        for b in labels[i:]:
            name = f"entry {a}*{b}"
            entry = entries.get((a, b))
            if entry is None:
                failures.append(f"{name}: missing")
                continue
            outside = [label for label in entry.multiplicities if label not in modules]
            if outside:
                failures.append(f"{name}: classes {outside} are not in the closure")
                continue
            left, right = modules[a], modules[b]
            order = left.group.order
            total = sum(count * modules[label].dim for label, count in entry.multiplicities.items())
            if left.dim * right.dim != total + entry.free_rank * order:
                failures.append(f"{name}: dimensions do not balance")
                continue
            blocks, free = _product((left, right), config)
            counts: Counter = Counter()
            for block in blocks:
                match = next(
                    (
                        label
                        for label, rep in modules.items()
                        if rep.dim == block.dim and is_isomorphic(block, rep, config)
                    ),
                    None,
                )
                counts[match or "unlisted"] += 1
            recomputed = dict(counts)
            recorded = {label: count for label, count in entry.multiplicities.items() if count}
            if free != entry.free_rank or recomputed != recorded:
                failures.append(f"{name}: recorded {recorded} + {entry.free_rank} free, recomputed {recomputed} + {free} free")
    return VerificationResult(ok=not failures, failures=failures)


def verify_nonalgebraic_certificate(
    cert: NonAlgebraicCertificate, config: RunConfig = DEFAULT_CONFIG
) -> VerificationResult:
    """Re-extract the summand, re-test it against the claimed translate and re-run periodicity."""
    failures: list[str] = []
    try:
        base = from_data(cert.base)
        summand = from_data(cert.summand)
    except GreenRingError as exc:
        return VerificationResult(ok=False, failures=[f"modules: {exc}"])
    if cert.n < 2:
        failures.append(f"tensor power {cert.n} is below 2")
    if cert.i == 0:
        failures.append("shift i must be nonzero")
    if failures:
        return VerificationResult(ok=False, failures=failures)
    if not is_indecomposable(summand, config):
        failures.append("summand is decomposable")

    power = tensor_power(base, cert.n)
    iota = _matrix(base, cert.witness.inclusion, (power.dim, summand.dim))
    pi = _matrix(base, cert.witness.projection, (summand.dim, power.dim))
    if iota is None or not is_module_map(iota, summand, power):
        failures.append("witness: inclusion is not a module map into M^n")
    elif pi is None or not is_module_map(pi, power, summand):
        failures.append("witness: projection is not a module map onto the summand")
    elif not fl.is_zero(pi @ iota - base.gf.Identity(summand.dim)):
        failures.append("witness: projection after inclusion is not the identity")

    source = base if cert.direction == "M" else dual(base)
    translate = omega_n(source, cert.i, config)
    phi = _matrix(base, cert.translate_iso, (translate.dim, summand.dim))
    if phi is None or not is_module_iso(phi, summand, translate):
        if not is_isomorphic(summand, translate, config):
            failures.append(f"translate: summand is not isomorphic to Omega^{cert.i}({cert.direction})")

    try:
        report = periodicity(base, config)
        if report.verdict != "NonPeriodic":
            failures.append(f"nonperiodicity: base re-tested as {report.verdict}")
    except GreenRingError as exc:
        failures.append(f"nonperiodicity: {exc}")
    return VerificationResult(ok=not failures, failures=failures)
