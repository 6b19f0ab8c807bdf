#!/usr/bin/env python3
"""
IFCIL verifier - Main Application
---------------------------------
Command-line entry point: checks the ;IFL; requirements of a CIL
configuration, or dumps the intermediate artifacts of the pipeline.
"""

import argparse
import logging
import sys
from pathlib import Path

# Add project root to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.cil.printer import render_config
from src.controllers.verification_controller import (VerificationController,
                                                     exit_status)
from src.ui.report import graph_dump, text_report, write_report
from src.utils.config import Config
from src.utils.errors import IfcilError
from src.utils.logger import get_logger, setup_logger

logger = get_logger(__name__)

DISAGREEMENT_EXIT = 3
INTERNAL_ERROR_EXIT = 16


def parse_args(argv=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Verify information-flow requirements of IFCIL configurations")
    parser.add_argument('input', help='CIL configuration with ;IFL; annotations')
    parser.add_argument('-c', '--config', help='Path to config file')
    parser.add_argument('-d', '--debug', action='store_true', help='Enable debug logging')
    parser.add_argument('--flows', help='Flow direction table')
    parser.add_argument('--strict-flows', action='store_true', default=None,
                        help='Fail on operations missing from the flow table')

    mode = parser.add_mutually_exclusive_group()
    mode.add_argument('--emit-nusmv', metavar='PATH', help='Write the NuSMV model to PATH')
    mode.add_argument('--dump-normalized', action='store_true',
                      help='Print the normalized configuration')
    mode.add_argument('--dump-graph', action='store_true',
                      help='Print the permission graph and the information flow diagram')
    mode.add_argument('--oracle', action='store_true',
                      help='Decide requirements by exhaustive path exploration')

    parser.add_argument('--force', action='store_true',
                        help='Run the oracle regardless of oracle.max_types')
    parser.add_argument('--report', metavar='PATH', help='Write a YAML report to PATH')
    parser.add_argument('--run-nusmv', action='store_true',
                        help='Cross-check verdicts with an external NuSMV binary')
    return parser.parse_args(argv)


def _configure_logging(args, config):
    if args.debug:
        level = logging.DEBUG
    else:
        level = getattr(logging, str(config.get('system.log_level', 'INFO')).upper(), logging.INFO)
    setup_logger(level=level, log_file=config.get('system.log_file'))


def run(args):
    """Execute one invocation; returns the exit status."""
    config = Config(args.config)
    _configure_logging(args, config)

    controller = VerificationController(config, args.flows, args.strict_flows)
    controller.load(args.input)

    if args.dump_normalized:
        sys.stdout.write(render_config(controller.normalized))
        return 0

    controller.build()

    if args.dump_graph:
        sys.stdout.write(graph_dump(controller.graph, controller.ifd))
        return 0
    if args.emit_nusmv:
        controller.emit_nusmv(args.emit_nusmv)
        return 0

    if args.oracle:
        verdicts = controller.verify_with_oracle(args.force)
    else:
        verdicts = controller.verify()

    sys.stdout.write(text_report(verdicts, config.get('verifier.witness_cap', 20)))
    if args.report:
        write_report(args.report, verdicts, controller.warnings)

    if args.run_nusmv and controller.cross_check(verdicts):
        return DISAGREEMENT_EXIT
    return exit_status(verdicts)


def main(argv=None):
    """Main application entry point."""
    args = parse_args(argv)
    setup_logger(level=logging.DEBUG if args.debug else logging.INFO)

    try:
        return run(args)
    except IfcilError as e:
        logger.error(str(e))
        return e.exit_code
    except Exception as e:
        logger.error(f"Fatal error: {e}")
        logger.exception("Exception details:")
        return INTERNAL_ERROR_EXIT


if __name__ == "__main__":
    sys.exit(main())
