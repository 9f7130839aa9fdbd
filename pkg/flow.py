import logging
import sys
from pathlib import Path

from src.algcheck import conjecture_harness, green_polynomial, translate_verdicts
from src.census import census_modules, enumerate_modules, stretch_census
from src.config import RunConfig, load_config, load_stages
from src.modules import is_self_dual

logger = logging.getLogger(__name__)


def start():
    def mark(method):
        method.stage_trigger = None
        return method

    return mark


def listen(trigger):
    """Run the decorated stage on the output of ``trigger``."""

    def mark(method):
        method.stage_trigger = trigger.__name__
        return method

    return mark


class HarnessPipeline:
    """census -> periodicity/closure -> report, sharing one state dict."""

    def __init__(self, config: RunConfig, census: dict | None = None, modules=None, stretch: bool = False):
        if (census is None) == (modules is None):
            raise ValueError("give either census parameters or a module list")
        self.config = config
        self.census = census
        self.modules = modules
        self.stretch = stretch
        self.stages = load_stages()
        self.report_file = None
        self.state: dict = {}

    @start()
    def census_stage(self):
        if self.modules is not None:
            self.state["census"] = None
            return self.modules

        p, dim = self.census["p"], self.census["dim"]
        logger.info("census stage: p=%d dim=%d", p, dim)
        if self.stretch:
            result = stretch_census(p, dim, self.config)
        else:
            result = enumerate_modules(p, dim, indecomposable_only=True, config=self.config)
        self.state["census"] = result
        return census_modules(result)

    @listen(census_stage)
    def harness_stage(self, modules):
        logger.info("harness stage: %d rows", len(modules))
        report = conjecture_harness(modules, self.config)
        self.state["report"] = report

        census = self.state.get("census")
        if census is not None:
            rows = {row.label: row for row in report.rows}
            for c in census.classes:
                row = rows[c.label]
                if row.periodicity.verdict in ("Periodic", "NonPeriodic"):
                    c.periodic = row.periodicity.verdict == "Periodic"
                c.algebraic = row.closure.verdict

        window = self.config.budgets.omega_window
        translates = {}
        for (label, m), row in zip(modules, report.rows):
            self_dual = row.periodicity.verdict == "NonPeriodic" and is_self_dual(m, self.config)
            translates[label] = translate_verdicts(row.periodicity, row.closure, window, self_dual)
        self.state["translates"] = translates
        return report

    @listen(harness_stage)
    def report_writing_stage(self, report):
        path = Path(self.report_file or self.stages["report_writing_stage"]["output_file"])
        census = self.state.get("census")

        lines = ["# Harness Report", ""]
        lines += ["**Configuration:**", ""]
        for key, value in report.config.items():
            lines.append(f"- {key}: {value}")
        lines.append("")

        if census is not None:
            lines += ["**Census:**", ""]
            lines.append(f"- p = {census.p}, dim = {census.dim}, mode: {census.mode}")
            lines.append(f"- Isomorphism classes: {census.total_classes}")
            lines.append(f"- Indecomposable: {census.indecomposable_count}")
            lines.append(f"- Absolutely indecomposable: {census.abs_indecomposable_count}")
            lines.append(f"- Up to swapping generators: {census.swap_classes}")
            if census.note:
                lines.append(f"- Note: {census.note}")
            lines.append("")

        lines += ["**Verdicts:**", ""]
        lines.append("| Label | Dim | In scope | Periodicity | Complexity | Closure | Counterexample |")
        lines.append("|---|---|---|---|---|---|---|")
        for row in report.rows:
            lines.append(
                f"| {row.label} | {row.dim} | {'yes' if row.in_scope else 'no'} | {row.periodicity.verdict} | "
                f"{row.periodicity.complexity if row.periodicity.complexity is not None else '-'} | "
                f"{row.closure.verdict} | {'yes' if row.counterexample else 'no'} |"
            )
        lines.append("")

        algebraic = [row for row in report.rows if row.closure.verdict == "Algebraic" and row.closure.certificate]
        if algebraic:
            lines += ["**Green Polynomials (modulo projectives):**", ""]
            for row in algebraic:
                cert = row.closure.certificate
                if cert.classes:
                    lines.append(f"- {row.label}: {green_polynomial(cert).text}, {len(cert.classes)} classes")
                else:
                    lines.append(f"- {row.label}: projective")
            lines.append("")

        nonalgebraic = [row for row in report.rows if row.closure.verdict == "NonAlgebraic"]
        if nonalgebraic:
            lines += ["**Non-algebraicity Witnesses:**", ""]
            for row in nonalgebraic:
                cert = row.closure.nonalgebraic
                lines.append(
                    f"- {row.label}: Omega^{cert.i}({cert.direction}) (dim {cert.summand.dim}) is a summand of M^{cert.n}"
                )
            lines.append("")

        notes = [(row.label, row.periodicity.note) for row in report.rows if row.periodicity.note]
        notes += [(row.label, row.closure.progress) for row in report.rows if row.closure.progress]
        if notes:
            lines += ["**Notes:**", ""]
            lines += [f"- {label}: {note}" for label, note in notes]
            lines.append("")

        lines += ["**Summary:**", ""]
        lines.append(f"- Periodic and algebraic: {report.periodic_algebraic}")
        lines.append(f"- Non-periodic and non-algebraic: {report.nonperiodic_nonalgebraic}")
        lines.append(f"- Projective: {report.projective}")
        lines.append(f"- Inconclusive: {report.inconclusive}")
        lines.append(f"- Counterexamples: {', '.join(report.counterexamples) or 'none'}")
        if report.discarded_candidates:
            lines.append(f"- Discarded on re-verification: {', '.join(report.discarded_candidates)}")

        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
        self.state["report_file"] = path
        logger.info("report written to %s", path)
        return report

    def _stages(self):
        return {
            name: getattr(self, name)
            for name, member in vars(type(self)).items()
            if callable(member) and hasattr(member, "stage_trigger")
        }

    def kickoff(self, report_file=None):
        """Run the start stage, then each stage listening to the one that just finished."""
        self.report_file = report_file
        stages = self._stages()
        current = next(name for name, stage in stages.items() if stage.stage_trigger is None)
        output = stages[current]()
        self.state["stages"] = [current]
        while True:
            listeners = [name for name, stage in stages.items() if stage.stage_trigger == current]
            if not listeners:
                return output
            current = listeners[0]
            output = stages[current](output)
            self.state["stages"].append(current)


## Example run: the dimension-3 census for C_3 x C_3

if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    flow = HarnessPipeline(load_config(), census={"p": 3, "dim": 3})
    result = flow.kickoff()
    sys.exit(1 if result.counterexamples else 0)
