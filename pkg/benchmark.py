#!/usr/bin/env python3
"""
IFCIL Verifier Benchmark Script
-------------------------------
Generates a synthetic configuration and times every stage of the pipeline
on it.
"""

import argparse
import logging
import sys
import tempfile
import time
from pathlib import Path

from src.controllers.verification_controller import VerificationController
from src.ui.report import text_report
from src.utils.config import Config
from src.utils.logger import setup_logger
from src.utils.synthetic import generate_config


def parse_args():
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description="IFCIL verifier benchmark")
    parser.add_argument('-c', '--config', default=None, help='Path to config file')
    parser.add_argument('-d', '--debug', action='store_true', help='Enable debug mode')
    parser.add_argument('--types', type=int, default=500)
    parser.add_argument('--attributes', type=int, default=50)
    parser.add_argument('--allows', type=int, default=5000)
    parser.add_argument('--requirements', type=int, default=16)
    parser.add_argument('--seed', type=int, default=0)
    return parser.parse_args()


def main():
    """Main benchmark function."""
    args = parse_args()
    setup_logger(level=logging.DEBUG if args.debug else logging.WARNING)

    config = Config(args.config)
    controller = VerificationController(config)
    timings = []

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / 'synthetic.cil'
        start = time.perf_counter()
        path.write_text(generate_config(args.types, args.attributes, args.allows,
                                        args.requirements, args.seed), encoding='utf-8')
        timings.append(('generate', time.perf_counter() - start))

        start = time.perf_counter()
        controller.load(path)
        timings.append(('parse + normalize', time.perf_counter() - start))

    start = time.perf_counter()
    controller.build()
    timings.append(('graph + IFD + KTS', time.perf_counter() - start))

    start = time.perf_counter()
    verdicts = controller.verify()
    timings.append(('verify', time.perf_counter() - start))

    print("\n" + "="*60)
    print("IFCIL VERIFIER BENCHMARK")
    print("="*60)
    print(f"{args.types} types, {args.attributes} typeattributes, "
          f"{args.allows} allow rules, {args.requirements} requirements")
    print(f"{len(controller.kts.transitions)} KTS transitions")
    print("-"*60)
    for stage, seconds in timings:
        print(f"{stage:<20} {seconds:8.2f} s")
    print(f"{'total':<20} {sum(s for _, s in timings):8.2f} s")
    print("-"*60)
    print(text_report(verdicts, config.get('verifier.witness_cap', 20)), end='')
    return 0


if __name__ == "__main__":
    sys.exit(main())
