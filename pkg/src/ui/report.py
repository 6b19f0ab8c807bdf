#!/usr/bin/env python3
"""
Reports
-------
Human-readable verdict lines, the machine-readable YAML report and the
graph dump printed by --dump-graph.
"""

import yaml

from src.utils.logger import get_logger
from src.verifier.checker import Outcome

logger = get_logger(__name__)

DEFAULT_WITNESS_CAP = 20


def render_witness(witness, cap=DEFAULT_WITNESS_CAP):
    """'n1 -[op]-> n2 -[op]-> n3', elided after cap steps."""
    shown = witness if cap is None else witness[:cap]
    text = str(shown[0][0])
    for _, op, dst in shown:
        text += f" -[{op}]-> {dst}"
    if len(shown) < len(witness):
        text += " ..."
    return text


def text_report(verdicts, witness_cap=DEFAULT_WITNESS_CAP):
    """
    One line per requirement, followed by its witness path when present.

    Args:
        verdicts: Verdicts in report order
        witness_cap: Maximum number of steps printed per witness

    Returns:
        Report text
    """
    lines = []
    for verdict in verdicts:
        lines.append(f"{verdict.label}: {verdict.outcome.value}")
        if verdict.witness:
            lines.append(f"  {render_witness(verdict.witness, witness_cap)}")
        elif verdict.outcome is Outcome.UNKNOWN and verdict.detail:
            lines.append(f"  {verdict.detail}")
    return '\n'.join(lines) + '\n' if lines else ''


def report_document(verdicts, warnings=()):
    """Plain data for the YAML report: one record per requirement plus warnings."""
    records = []
    for verdict in verdicts:
        record = {
            'label': verdict.label,
            'requirement': str(verdict.requirement),
            'outcome': verdict.outcome.value,
        }
        if verdict.witness:
            record['witness'] = [[str(src), op, str(dst)] for src, op, dst in verdict.witness]
        if verdict.detail:
            record['detail'] = verdict.detail
        records.append(record)
    counts = {}
    for verdict in verdicts:
        counts[verdict.outcome.value] = counts.get(verdict.outcome.value, 0) + 1
    return {
        'requirements': records,
        'summary': dict(sorted(counts.items())),
        'warnings': list(warnings),
    }


def write_report(path, verdicts, warnings=()):
    """Write the machine-readable report."""
    with open(path, 'w', encoding='utf-8') as f:
        yaml.safe_dump(report_document(verdicts, warnings), f,
                       default_flow_style=False, sort_keys=False)
    logger.info(f"Report written to {path}")


def _arc_lines(arcs):
    return [f"{src} {','.join(sorted(ops))} {dst}"
            for src, ops, dst in sorted(arcs, key=lambda a: (a[0], a[2], sorted(a[1])))]


def graph_dump(graph, ifd):
    """Permission arcs then information-flow arcs, one 'src ops dst' line each."""
    lines = ['# permission graph']
    lines.extend(_arc_lines(graph.arc_set()))
    lines.append('# information flow diagram')
    lines.extend(_arc_lines(ifd.arc_set()))
    return '\n'.join(lines) + '\n'
