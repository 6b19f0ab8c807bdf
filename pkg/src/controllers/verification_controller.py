#!/usr/bin/env python3
"""
Verification Controller
-----------------------
Drives the whole pipeline for one configuration file: parse, normalize,
build the graph semantics, derive the information-flow diagram and the KTS,
then check every requirement (or hand the model to NuSMV).
"""

import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from src.cil.parser import parse_file
from src.controllers.normalizer import Normalizer
from src.nusmv.emitter import add_sink, emit
from src.nusmv.response import parse_response, run_nusmv
from src.semantics.flows import FlowTable, build_ifd
from src.semantics.graph import build_graph, collect_requirements
from src.utils.errors import OracleRefusedError
from src.utils.logger import get_logger
from src.verifier.checker import Outcome, Verdict, check
from src.verifier.kts import build_kts
from src.verifier.paths import oracle_holds

logger = get_logger(__name__)


def exit_status(verdicts):
    """0 if everything holds, 1 on any violation, 2 if some check was undecided."""
    outcomes = {v.outcome for v in verdicts}
    if Outcome.VIOLATED in outcomes:
        return 1
    if Outcome.UNKNOWN in outcomes:
        return 2
    return 0


class VerificationController:
    """
    Main controller for a verification run.
    Stages run lazily: asking for verdicts parses and builds whatever is missing.
    """

    def __init__(self, config, flows_path=None, strict_flows=None):
        """
        Initialize the verification controller.

        Args:
            config: Configuration object
            flows_path: Flow table file overriding flows.table
            strict_flows: Strict flow table resolution overriding flows.strict
        """
        self.config = config
        self.flows_path = flows_path or config.get('flows.table')
        self.strict_flows = config.get('flows.strict', False) if strict_flows is None else strict_flows
        self.warnings = []

        self.parsed = None
        self.normalized = None
        self.graph = None
        self.ifd = None
        self.kts = None
        self.requirements = []

        logger.debug("Verification controller initialized")

    def load(self, path):
        """Parse and normalize a configuration file."""
        logger.info(f"Loading {path}")
        self.parsed = parse_file(path, self.warnings)
        normalizer = Normalizer(self.config.get('refinement.search_budget', 20000), self.warnings)
        self.normalized = normalizer.run(self.parsed).gamma
        logger.info(f"Normalized {len(self.parsed)} rules into {len(self.normalized)}")
        return self.normalized

    def flow_table(self):
        if self.flows_path:
            return FlowTable.from_file(self.flows_path, self.strict_flows, self.warnings)
        message = "no flow table given; using built-in flow directions"
        logger.warning(message)
        self.warnings.append(message)
        return FlowTable.defaults(self.strict_flows, self.warnings)

    def build(self):
        """Build graph, IFD and KTS of the normalized configuration."""
        self.graph = build_graph(self.normalized, self.warnings)
        self.requirements = collect_requirements(self.normalized, self.graph)
        self.ifd = build_ifd(self.graph, self.flow_table())
        self.kts = build_kts(self.ifd)
        logger.info(f"{len(self.requirements)} requirements to check")

    def verify(self):
        """Check every requirement with the automaton checker."""
        limit = self.config.get('verifier.determinization_limit', 16384)
        workers = self.config.get('verifier.workers', 1) or 1

        def run_check(labeled):
            return check(self.kts, labeled, determinization_limit=limit)

        if workers > 1 and len(self.requirements) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                verdicts = list(pool.map(run_check, self.requirements))
        else:
            verdicts = [run_check(labeled) for labeled in self.requirements]

        for verdict in verdicts:
            logger.debug(f"({verdict.label}) {verdict.outcome.value}")
        return verdicts

    def verify_with_oracle(self, force=False):
        """Decide every requirement by exhaustive path exploration."""
        max_types = self.config.get('oracle.max_types', 12)
        if len(self.ifd.types) > max_types and not force:
            raise OracleRefusedError(f"oracle refused: {len(self.ifd.types)} types exceed "
                                     f"oracle.max_types={max_types} (use --force)")
        verdicts = []
        for labeled in self.requirements:
            holds = oracle_holds(self.ifd, labeled.requirement)
            outcome = Outcome.SATISFIED if holds else Outcome.VIOLATED
            verdicts.append(Verdict(labeled.label, labeled.requirement, outcome))
        return verdicts

    def nusmv_model(self):
        """Text of the NuSMV model for the loaded configuration."""
        sink_kts = add_sink(self.kts, self.config.get('nusmv.rename', {}))
        return emit(sink_kts, self.requirements, self.graph,
                    self.config.get('nusmv.compact_constraints', False))

    def emit_nusmv(self, path):
        Path(path).write_text(self.nusmv_model(), encoding='utf-8')
        logger.info(f"NuSMV model written to {path}")

    def cross_check(self, verdicts):
        """
        Run NuSMV on the model and compare its verdicts with ours.

        Returns:
            Labels on which the two disagree
        """
        with tempfile.TemporaryDirectory() as tmp:
            model = Path(tmp) / 'model.smv'
            model.write_text(self.nusmv_model(), encoding='utf-8')
            output = run_nusmv(model, self.config.get('nusmv.binary', 'NuSMV'),
                               self.config.get('nusmv.timeout', 60))
        external = parse_response(output, self.requirements)
        disagreements = []
        for ours, theirs in zip(verdicts, external):
            if ours.outcome is Outcome.UNKNOWN:
                continue
            if ours.outcome is not theirs.outcome:
                logger.error(f"({ours.label}) verifier says {ours.outcome.value}, "
                             f"NuSMV says {theirs.outcome.value}")
                disagreements.append(ours.label)
        return disagreements

    def run(self, path, use_oracle=False, force=False):
        """Load, build and verify; returns the verdicts."""
        self.load(path)
        self.build()
        if use_oracle:
            return self.verify_with_oracle(force)
        return self.verify()
