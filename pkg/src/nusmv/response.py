"""
NuSMV responses
---------------
Runs an external NuSMV binary on an emitted model and turns the
'-- specification ... is true/false' lines of its output into verdicts.
"""

import re
import subprocess

from src.nusmv.emitter import emission_order, expects_counterexample
from src.utils.errors import ResponseError
from src.utils.logger import get_logger
from src.verifier.checker import Outcome, Verdict

logger = get_logger(__name__)

_RESULT = re.compile(r'^--\s+specification\s+.*\s+is\s+(true|false)\s*$')


def parse_response(text, requirements):
    """
    Map checker output to verdicts.

    Args:
        text: NuSMV standard output
        requirements: The LabeledRequirements the model was emitted with

    Returns:
        List of Verdict, in the order of requirements

    Raises:
        ResponseError: Output does not hold one result per requirement
    """
    results = [m.group(1) == 'true'
               for m in (_RESULT.match(line.strip()) for line in text.splitlines()) if m]
    if not results:
        raise ResponseError("no specification results in checker output")
    if len(results) != len(requirements):
        raise ResponseError(f"checker reported {len(results)} results for "
                            f"{len(requirements)} specifications")

    outcomes = {}
    for labeled, valid in zip(emission_order(requirements), results):
        holds = not valid if expects_counterexample(labeled.requirement) else valid
        outcomes[id(labeled)] = Outcome.SATISFIED if holds else Outcome.VIOLATED
    return [Verdict(labeled.label, labeled.requirement, outcomes[id(labeled)])
            for labeled in requirements]


def run_nusmv(smv_path, binary='NuSMV', timeout=60):
    """
    Run NuSMV on a model file.

    Returns:
        Standard output of the run
    """
    command = [binary, str(smv_path)]
    logger.info(f"Running {' '.join(command)}")
    try:
        completed = subprocess.run(command, capture_output=True, text=True,
                                   timeout=timeout, check=False)
    except FileNotFoundError:
        raise ResponseError(f"model checker binary '{binary}' not found; set nusmv.binary") from None
    except subprocess.TimeoutExpired:
        raise ResponseError(f"model checker timed out after {timeout}s") from None
    if completed.returncode != 0:
        raise ResponseError(f"model checker exited with status {completed.returncode}: "
                            f"{completed.stderr.strip()}")
    return completed.stdout
