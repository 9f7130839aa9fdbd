"""
Command-line front door.

Every command reads module files, runs one operation and prints a short report.
Exit codes: 0 when a verdict was reached (NonAlgebraic included), 2 when the
verdict is Inconclusive or Unknown, 1 on input or usage errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from src.algcheck import green_polynomial, periodicity, tensor_closure
from src.arquiver import Signature, algebraic_positions, diamond_check, formula_grid, propagate, read_grid, write_grid
from src.census import enumerate_modules, stretch_census, write_census
from src.certificates import emit_certificate, read_certificate, verify_certificate, write_certificate
from src.config import CACHE_ENV, RunConfig, load_config
from src.decomp import decompose, strip_projectives
from src.errors import GreenRingError
from src.formats import load_module, save_module, write_module
from src.heller import omega_n
from src.modules import Module, SubgroupSpec, dual, restrict, tensor, validate
from src.output_pydantic import CensusResult, ClosureResult, HarnessReport, PeriodicityReport

logger = logging.getLogger("greenring")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONCLUSIVE = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


# Report text

def closure_text(result: ClosureResult) -> str:
    if result.verdict == "Algebraic":
        cert = result.certificate
        table = ", ".join(entry_text(e) for e in cert.table) or "empty"
        lines = [f"Algebraic; classes: {len(cert.classes)}; table: {table}"]
        if cert.classes:
            lines.append(f"polynomial: {green_polynomial(cert).text} = 0 modulo projectives")
    elif result.verdict == "NonAlgebraic":
        cert = result.nonalgebraic
        lines = [
            f"NonAlgebraic; Omega^{cert.i}({cert.direction}) is a summand of M^{cert.n} "
            f"(dim {cert.summand.dim}); complexity {cert.nonperiodicity.complexity}"
        ]
    else:
        lines = [f"Inconclusive; {result.progress}"]
        if result.partial is not None:
            lines.append(f"partial: {len(result.partial.classes)} classes, {len(result.partial.table)} table entries")
    lines.append(f"steps: {result.steps}; config: {result.config}")
    return "\n".join(lines)


def entry_text(entry) -> str:
    terms = [label if count == 1 else f"{count}{label}" for label, count in sorted(entry.multiplicities.items())]
    if entry.free_rank:
        terms.append("KG" if entry.free_rank == 1 else f"{entry.free_rank}KG")
    return f"{entry.left}·{entry.right} = {' + '.join(terms) or '0'}"


def periodicity_text(report: PeriodicityReport, p: int) -> str:
    text = report.verdict
    if report.period is not None:
        text += f"; period {report.period}"
    if report.complexity is not None:
        text += f"; complexity {report.complexity}"
    if report.lines:
        nonfree = sum(not line.free for line in report.lines)
        text += f"; {nonfree}/{len(report.lines)} lines non-free over GF({p}^{report.sampling_degree})"
    if report.assumption:
        text += f"\nassumption: {report.assumption}"
    if report.note:
        text += f"\nnote: {report.note}"
    return text


def census_text(result: CensusResult) -> str:
    lines = [
        f"census p={result.p} dim={result.dim} ({result.mode}): {len(result.classes)} classes listed, "
        f"{result.total_classes} in total, {result.indecomposable_count} indecomposable, "
        f"{result.abs_indecomposable_count} absolutely indecomposable, {result.swap_classes} up to swap"
    ]
    if result.total_pairs is not None:
        lines.append(f"generator pairs: {result.total_pairs}")
    for c in result.classes:
        flags = "abs" if c.absolutely_indecomposable else ("ind" if c.indecomposable else "dec")
        lines.append(f"{c.label}  {flags}  orbit {c.orbit_size}  swap {c.swap_label}")
    if result.partial:
        lines.append(f"partial: {result.note}")
    elif result.note:
        lines.append(f"note: {result.note}")
    return "\n".join(lines)


def harness_text(report: HarnessReport) -> str:
    lines = [f"{'label':8} {'dim':>4} {'scope':>5}  {'periodic':11} {'algebraic':13} counterexample"]
    for row in report.rows:
        lines.append(
            f"{row.label:8} {row.dim:>4} {'yes' if row.in_scope else 'no':>5}  "
            f"{row.periodicity.verdict:11} {row.closure.verdict:13} {'YES' if row.counterexample else 'no'}"
        )
    lines.append(
        f"periodic+algebraic: {report.periodic_algebraic}; non-periodic+non-algebraic: "
        f"{report.nonperiodic_nonalgebraic}; projective: {report.projective}; inconclusive: {report.inconclusive}; "
        f"counterexamples: {len(report.counterexamples)}"
    )
    return "\n".join(lines)


# Commands

def _emit(module: Module, out: str | None) -> None:
    if out:
        save_module(module, out)
        print(f"dim {module.dim} module written to {out}")
    else:
        sys.stdout.write(write_module(module))


def cmd_validate(args, config: RunConfig) -> int:
    m = load_module(args.module, check=False)
    problems = validate(m)
    if problems:
        for problem in problems:
            print(problem)
        return EXIT_INPUT
    print(f"ok: p={m.p} rank={m.group.rank} dim={m.dim}")
    return EXIT_OK


def cmd_decompose(args, config: RunConfig) -> int:
    m = load_module(args.module)
    result = decompose(m, config)
    core, free = strip_projectives(m, config)
    print(f"dim {m.dim} = " + " + ".join(f"{count}x[dim {block.dim}]" for block, count in result.summands))
    print(f"free rank {free}; projective-free core dim {core.dim}")
    if args.out:
        for k, block in enumerate(result.blocks, start=1):
            save_module(block, Path(args.out) / f"summand{k:02d}.mod")
    return EXIT_OK


def cmd_tensor(args, config: RunConfig) -> int:
    _emit(tensor(load_module(args.left), load_module(args.right)), args.out)
    return EXIT_OK


def cmd_dual(args, config: RunConfig) -> int:
    _emit(dual(load_module(args.module)), args.out)
    return EXIT_OK


def cmd_restrict(args, config: RunConfig) -> int:
    m = load_module(args.module)
    basis = tuple(tuple(int(x) % m.p for x in vector.split(",")) for vector in args.basis)
    _emit(restrict(m, SubgroupSpec(group=m.group, basis=basis)), args.out)
    return EXIT_OK


def cmd_omega(args, config: RunConfig) -> int:
    _emit(omega_n(load_module(args.module), args.n, config), args.out)
    return EXIT_OK


def cmd_periodicity(args, config: RunConfig) -> int:
    m = load_module(args.module)
    report = periodicity(m, config)
    print(periodicity_text(report, m.p))
    if args.out:
        write_certificate(emit_certificate(m, report, config), args.out)
    return EXIT_INCONCLUSIVE if report.verdict == "Unknown" else EXIT_OK


def cmd_closure(args, config: RunConfig) -> int:
    m = load_module(args.module)
    cache = config.cache_dir if (args.cache or os.getenv(CACHE_ENV)) else None
    result = tensor_closure(m, config, cache)
    print(closure_text(result))
    if result.verdict == "Inconclusive":
        return EXIT_INCONCLUSIVE
    if args.out:
        write_certificate(emit_certificate(m, result, config), args.out)
        print(f"certificate written to {args.out}")
    return EXIT_OK


def _key_values(tokens: list[str]) -> dict[str, int]:
    out = {}
    for token in tokens:
        for part in token.split(","):
            key, sep, value = part.partition("=")
            if not sep:
                raise GreenRingError(f"expected key=value, found {part!r}")
            try:
                out[key.strip()] = int(value)
            except ValueError:
                raise GreenRingError(f"{key} needs an integer value, found {value!r}") from None
    missing = {"p", "dim"} - out.keys()
    if missing:
        raise GreenRingError(f"missing {sorted(missing)[0]}=...")
    return out


def _run_census(spec: dict[str, int], indecomposable: bool, stretch: bool, config: RunConfig) -> CensusResult:
    if stretch:
        return stretch_census(spec["p"], spec["dim"], config)
    return enumerate_modules(spec["p"], spec["dim"], indecomposable, config)


def cmd_census(args, config: RunConfig) -> int:
    result = _run_census(_key_values(args.spec), args.indecomposable, args.stretch, config)
    print(census_text(result))
    if args.out:
        write_census(result, args.out)
    return EXIT_INCONCLUSIVE if result.partial else EXIT_OK


def cmd_harness(args, config: RunConfig) -> int:
    from flow import HarnessPipeline

    if args.census:
        pipeline = HarnessPipeline(config, census=_key_values([args.census]), stretch=args.stretch)
    elif args.modules:
        pipeline = HarnessPipeline(config, modules=[(Path(f).stem, load_module(f)) for f in args.modules])
    else:
        raise GreenRingError("harness needs --census p=..,dim=.. or module files")
    report = pipeline.kickoff(report_file=args.out)
    print(harness_text(report))
    if report.counterexamples:
        logger.warning("confirmed counterexample candidates: %s", ", ".join(report.counterexamples))
    return EXIT_INCONCLUSIVE if report.inconclusive else EXIT_OK


def cmd_quiver(args, config: RunConfig) -> int:
    if args.grid:
        grid = read_grid(Path(args.grid).read_text())
    else:
        seed = Signature((sym, 0) for sym in args.symbols)
        grid = propagate(seed, (-args.width, args.width), args.height)
        if grid.cells != formula_grid(seed, grid.i_range, grid.j_max).cells:
            print("propagation disagrees with the closed formula")
            return EXIT_INPUT
    failure = diamond_check(grid)
    if failure is not None:
        print(
            f"diamond at ({failure.i}, {failure.j}) fails: top+bottom {failure.top_plus_bottom} "
            f"!= left+right {failure.left_plus_right}"
        )
        return EXIT_INPUT
    positions = sorted(algebraic_positions(grid, args.designated), key=lambda ij: (ij[1], ij[0]))
    print(f"diamonds hold; algebraic positions: {positions}")
    if args.out:
        Path(args.out).write_text(write_grid(grid))
    elif args.print_grid:
        sys.stdout.write(write_grid(grid))
    return EXIT_OK


def cmd_verify_cert(args, config: RunConfig) -> int:
    cert = read_certificate(args.certificate)
    result = verify_certificate(cert, config)
    if result.ok:
        print(f"{cert.kind} certificate verified")
        return EXIT_OK
    for failure in result.failures:
        print(f"FAILED {failure}")
    return EXIT_INPUT


# Parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=lambda s: int(s, 0), help="root seed (decimal or 0x hex)")
    common.add_argument("--workers", type=int, help="worker threads")
    common.add_argument("--cache", help="registry cache directory (GREENRING_CACHE overrides)")
    common.add_argument("--max-classes", type=int, dest="max_classes")
    common.add_argument("--max-dim", type=int, dest="max_dim")
    common.add_argument("--max-steps", type=int, dest="max_steps")
    common.add_argument("--omega-window", type=int, dest="omega_window")
    common.add_argument("--config", help="alternative YAML configuration")
    common.add_argument("--out", help="output file or directory")
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="greenring", description="Modular representations of C_p^r over GF(p).")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    command("validate", cmd_validate, "check module invariants").add_argument("module")
    command("decompose", cmd_decompose, "Krull-Schmidt decomposition").add_argument("module")
    p = command("tensor", cmd_tensor, "tensor product of two modules")
    p.add_argument("left")
    p.add_argument("right")
    command("dual", cmd_dual, "dual module").add_argument("module")
    p = command("restrict", cmd_restrict, "restriction to a subgroup")
    p.add_argument("module")
    p.add_argument("--basis", action="append", required=True, help="subgroup basis vector, e.g. 1,0 (repeatable)")
    p = command("omega", cmd_omega, "Heller translate Omega^n")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("module")
    command("periodicity", cmd_periodicity, "periodicity and complexity").add_argument("module")
    command("closure", cmd_closure, "tensor-closure algebraicity check").add_argument("module")
    p = command("census", cmd_census, "enumerate modules of a dimension")
    p.add_argument("spec", nargs="+", help="p=3 dim=3")
    p.add_argument("--indecomposable", action="store_true")
    p.add_argument("--stretch", action="store_true", help="sampled census for larger dimensions")
    p = command("harness", cmd_harness, "periodicity against algebraicity")
    p.add_argument("modules", nargs="*")
    p.add_argument("--census", help="p=3,dim=3")
    p.add_argument("--stretch", action="store_true")
    p = command("quiver", cmd_quiver, "signature calculus on an interlaced component")
    p.add_argument("symbols", nargs="*", default=["x"], help="seed symbols at shift 0")
    p.add_argument("--grid", help="check a grid file instead of propagating a seed")
    p.add_argument("--width", type=int, default=6)
    p.add_argument("--height", type=int, default=6)
    p.add_argument("--designated", type=int)
    p.add_argument("--print-grid", action="store_true", dest="print_grid")
    command("verify-cert", cmd_verify_cert, "re-verify a certificate file").add_argument("certificate")
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT, force=True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    configure_logging(args.verbose)

    try:
        config = load_config(
            args.config,
            seed=args.seed,
            workers=args.workers,
            cache_dir=args.cache,
            max_classes=args.max_classes,
            max_dim=args.max_dim,
            max_steps=args.max_steps,
            omega_window=args.omega_window,
        )
        return args.func(args, config)
    except (GreenRingError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
