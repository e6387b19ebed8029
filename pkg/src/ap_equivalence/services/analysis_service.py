import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

from ap_equivalence.config import get_settings
from ap_equivalence.data_access.corpus import get_scenario, list_scenarios, load_corpus
from ap_equivalence.data_access.dsl_parser import parse, parse_file
from ap_equivalence.data_access.report_writer import experiment_frame, outcomes_frame, trace_frame, write_csv
from ap_equivalence.data_access.serializer import make_report, serialize_sum
from ap_equivalence.domain.exceptions import TruncationOutOfRange
from ap_equivalence.domain.models.reports import BochnerFejerReport, IntegralBasisReport, QBasisReport
from ap_equivalence.domain.models.workspace import JsonReport, Workspace
from ap_equivalence.services.approximation_service import DEFAULT_ORDER_SCHEDULE, ApproximationService
from ap_equivalence.services.basis_service import integral_basis, integral_basis_trace, qbasis
from ap_equivalence.services.equivalence_service import (
    Definition,
    bohr_equivalent_finite,
    equivalence_trace,
    star_equivalent,
    verify_verdict,
)
from ap_equivalence.services.sum_service import truncate
from ap_equivalence.services.value_set_service import ValueSetService

logger = logging.getLogger(__name__)

BF_SIGMA_RANGE = (-1.0, 1.0)


class AnalysisService:
    """Runs one command against a workspace and packs the outcome into a JsonReport."""

    def __init__(self, num_threads: Optional[int] = None):
        self.num_threads = num_threads or get_settings().num_threads
        self.approximation = ApproximationService(self.num_threads)
        self.value_sets = ValueSetService(self.num_threads)

    @staticmethod
    def load(path: Union[str, Path]) -> Workspace:
        return parse_file(path)

    @staticmethod
    def parse(text: str, source: Optional[str] = None) -> Workspace:
        return parse(text, source)

    @staticmethod
    def _inputs(workspace: Workspace, names: Sequence[str], **options: Any) -> Dict[str, Any]:
        return {
            "source": workspace.source,
            "sums": {name: workspace.provenance(name) for name in names},
            **{k: v for k, v in options.items() if v is not None},
        }

    def basis(self, workspace: Workspace, name: str) -> JsonReport:
        f = workspace.get(name)
        b = qbasis(f.exponents)
        report = QBasisReport(
            sum=name,
            symbols=list(f.table.names),
            basis_indices=list(b.basis_indices),
            basis=[list(g.coords) for g in b.basis],
            basis_labels=[g.label() for g in b.basis],
            representation=b.representation.to_lists(),
        )
        return make_report("basis", self._inputs(workspace, [name]), report)

    def integral_basis(self, workspace: Workspace, name: str, trace: Optional[int] = None) -> JsonReport:
        f = workspace.get(name)
        if trace is not None and not 1 <= trace <= len(f.terms):
            raise TruncationOutOfRange(f"trace length {trace} outside 1..{len(f.terms)} for '{name}'")
        module = integral_basis(f.exponents)
        steps = integral_basis_trace(lambda n: f.exponents[n - 1], trace) if trace else []
        report = IntegralBasisReport(
            sum=name,
            symbols=list(f.table.names),
            basis=[list(g.coords) for g in module.basis],
            basis_labels=[g.label() for g in module.basis],
            representation=module.representation.to_lists(),
            denominator=module.denominator,
            trace=steps,
        )
        return make_report("integral-basis", self._inputs(workspace, [name], trace=trace), report)

    def equivalence(
        self,
        workspace: Workspace,
        name1: str,
        name2: str,
        definition: Definition = "star",
        trace: Optional[int] = None,
    ) -> JsonReport:
        """Decide, then re-verify every verdict before reporting it."""
        f1, f2 = workspace.get(name1), workspace.get(name2)
        inputs = self._inputs(workspace, [name1, name2], definition=definition, trace=trace)
        try:
            if trace:
                result = equivalence_trace(f1, f2, trace)
                for entry in result.entries:
                    verify_verdict(entry.verdict, truncate(f1, entry.n), truncate(f2, entry.n))
                write_csv(trace_frame(result), f"trace-{name1}-{name2}")
                return make_report("equiv", inputs, result, negative=not result.equivalent)

            decide = bohr_equivalent_finite if definition == "bohr" else star_equivalent
            verdict = decide(f1, f2)
            verify_verdict(verdict, f1, f2)
            return make_report("equiv", inputs, verdict, negative=not verdict.equivalent)
        except Exception as e:
            logger.error(f"Equivalence of '{name1}' and '{name2}' failed: {str(e)}")
            raise

    def bochner_fejer(
        self,
        workspace: Workspace,
        name: str,
        orders: Sequence[int],
        schedule: bool = False,
        sigma_range: Tuple[float, float] = BF_SIGMA_RANGE,
    ) -> JsonReport:
        f = workspace.get(name)
        polynomial = self.approximation.bochner_fejer(f, list(orders))
        report = BochnerFejerReport(
            orders=list(polynomial.orders),
            weights=list(polynomial.weights),
            coordinates=polynomial.module.representation.to_lists() if polynomial.module else [],
            kept_terms=polynomial.kept_terms,
        )
        if schedule:
            stages = self.approximation.bochner_fejer_schedule(f, DEFAULT_ORDER_SCHEDULE, sigma_range)
            report = report.model_copy(update={"sigma_range": stages.sigma_range, "schedule": stages.schedule})
        result = {**report.model_dump(mode="json"), "realized": serialize_sum(polynomial.realized)}
        return make_report("bf", self._inputs(workspace, [name], orders=list(orders)), result)

    def mean_value(
        self, workspace: Workspace, name: str, sigma: float, frequency: float, T: float, step: Optional[float] = None
    ) -> JsonReport:
        f = workspace.get(name)
        estimate = self.approximation.mean_value(f, sigma, frequency, T, step)
        coefficient = estimate.value / math.exp(frequency * sigma)
        result = {**estimate.model_dump(mode="json"), "coefficient": [coefficient.real, coefficient.imag]}
        inputs = self._inputs(workspace, [name], sigma=sigma, frequency=frequency, T=T, step=step)
        return make_report("mean", inputs, result)

    def almost_periods(
        self, workspace: Workspace, name: str, epsilon: float, sigma_lo: float, sigma_hi: float, t_max: float
    ) -> JsonReport:
        f = workspace.get(name)
        report = self.approximation.almost_periods(f, epsilon, (sigma_lo, sigma_hi), search_max=t_max)
        inputs = self._inputs(workspace, [name], epsilon=epsilon, sigma_lo=sigma_lo, sigma_hi=sigma_hi, t_max=t_max)
        return make_report("almost-periods", inputs, report, negative=report.empty)

    def compare_values(
        self,
        workspace: Workspace,
        name1: str,
        name2: str,
        sigma_lo: float,
        sigma_hi: float,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        t_cap: Optional[float] = None,
        substrips: Optional[int] = None,
    ) -> JsonReport:
        """One value-set comparison, or the substrip experiment when substrips is given."""
        f1, f2 = workspace.get(name1), workspace.get(name2)
        inputs = self._inputs(
            workspace,
            [name1, name2],
            sigma_lo=sigma_lo,
            sigma_hi=sigma_hi,
            samples=samples,
            seed=seed,
            tol=tol,
            t_cap=t_cap,
            substrips=substrips,
        )
        try:
            if substrips:
                experiment = self.value_sets.equivalence_principle_experiment(
                    f1, f2, (sigma_lo, sigma_hi), substrips, samples, seed, tol, t_cap
                )
                write_csv(experiment_frame(experiment), f"values-{name1}-{name2}")
                return make_report("values", inputs, experiment, negative=not experiment.consistent_with_equivalence)

            comparison = self.value_sets.value_set_compare(f1, f2, (sigma_lo, sigma_hi), samples, seed, tol, t_cap)
            write_csv(outcomes_frame(comparison), f"values-{name1}-{name2}")
            return make_report("values", inputs, comparison, negative=not comparison.complete)
        except Exception as e:
            logger.error(f"Value-set comparison of '{name1}' and '{name2}' failed: {str(e)}")
            raise

    def translation(
        self, workspace: Workspace, name1: str, name2: str, sigma_lo: float, sigma_hi: float, t_max: float
    ) -> JsonReport:
        f1, f2 = workspace.get(name1), workspace.get(name2)
        report = self.approximation.translation_search(f1, f2, (sigma_lo, sigma_hi), t_max)
        inputs = self._inputs(workspace, [name1, name2], sigma_lo=sigma_lo, sigma_hi=sigma_hi, t_max=t_max)
        return make_report("translation", inputs, report)

    def corpus_list(self) -> JsonReport:
        scenarios = [
            {
                "name": s.name,
                "description": s.description,
                "command": s.command,
                "sums": list(s.sums),
                "options": s.options,
                "expected_status": s.expected_status,
            }
            for s in list_scenarios()
        ]
        return make_report("corpus list", {}, {"scenarios": scenarios})

    def run_scenario(self, name: str) -> JsonReport:
        scenario = get_scenario(name)
        workspace = load_corpus()
        logger.info(f"Running corpus scenario '{name}': {scenario.command} {' '.join(scenario.sums)}")
        try:
            if scenario.command == "equiv":
                report = self.equivalence(workspace, *scenario.sums, **scenario.options)
            elif scenario.command == "integral-basis":
                report = self.integral_basis(workspace, *scenario.sums, **scenario.options)
            elif scenario.command == "values":
                report = self.compare_values(workspace, *scenario.sums, **scenario.options)
            else:
                raise ValueError(f"Unknown scenario command: {scenario.command}")
        except Exception as e:
            logger.error(f"Corpus scenario '{name}' failed: {str(e)}")
            raise
        if report.status != scenario.expected_status:
            logger.warning(f"Scenario '{name}' finished '{report.status}', expected '{scenario.expected_status}'")
        return report.model_copy(update={"command": "corpus run", "inputs": {"scenario": name, **report.inputs}})
