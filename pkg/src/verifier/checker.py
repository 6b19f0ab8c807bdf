"""
Requirement checker
-------------------
Decides K |- R by breadth-first search over the product of the KTS with kind
automata. Existence and prohibition look for a reachable accepting product
state; a constraint P : P' looks for a path accepted by P whose subset-state
for P' lacks the final configuration. The subset for P' advances on every
operation of the diagram arc a step belongs to, as path kinds match arcs by
their whole operation set. Witnesses are the shortest paths the
search meets.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from src.ifl.kinds import Constraint, Exists, LabeledRequirement, Prohibit
from src.utils.logger import get_logger
from src.verifier.automaton import kind_to_automaton

logger = get_logger(__name__)

DEFAULT_DETERMINIZATION_LIMIT = 2 ** 14


class Outcome(Enum):
    SATISFIED = "SATISFIED"
    VIOLATED = "VIOLATED"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Verdict:
    """
    Result of checking one requirement.

    witness is a tuple of (state, op, state') steps: the flow found for an
    existence requirement, or the offending flow for a violated prohibition
    or constraint.
    """

    label: str
    requirement: object
    outcome: Outcome
    witness: Optional[Tuple] = None
    detail: str = ''

    @property
    def satisfied(self):
        return self.outcome is Outcome.SATISFIED


def _trace(parents, node):
    steps = []
    while parents[node] is not None:
        node, step = parents[node]
        steps.append(step)
    return tuple(reversed(steps))


def _find_flow(kts, kind):
    """Shortest KTS path whose flow has the kind, or None."""
    automaton = kind_to_automaton(kind, kts)
    parents = {}
    queue = deque()
    for state in kts.states:
        for config in sorted(automaton.initial(state)):
            parents[(state, config)] = None
            queue.append((state, config))

    while queue:
        node = queue.popleft()
        state, config = node
        for op, succ in kts.successors(state):
            for reached in sorted(automaton.advance(config, state, op, succ)):
                nxt = (succ, reached)
                if nxt in parents:
                    continue
                parents[nxt] = (node, (state, op, succ))
                if reached == automaton.final:
                    return _trace(parents, nxt)
                queue.append(nxt)
    return None


class DeterminizationLimitExceeded(Exception):
    def __init__(self, subsets):
        super().__init__(f"{subsets} subset states")
        self.subsets = subsets


def _find_counterexample(kts, antecedent, consequent, limit):
    """Shortest path with the antecedent kind but not the consequent, or None."""
    first = kind_to_automaton(antecedent, kts)
    second = kind_to_automaton(consequent, kts)
    subsets = set()
    parents = {}
    queue = deque()

    def note_subset(subset):
        subsets.add(subset)
        if len(subsets) > limit:
            raise DeterminizationLimitExceeded(len(subsets))

    for state in kts.states:
        subset = second.initial(state)
        for config in sorted(first.initial(state)):
            note_subset(subset)
            node = (state, config, subset)
            parents[node] = None
            queue.append(node)

    while queue:
        node = queue.popleft()
        state, config, subset = node
        for op, succ in kts.successors(state):
            reached_configs = first.advance(config, state, op, succ)
            if not reached_configs:
                continue
            # the consequent sees the whole diagram arc, not just this operation
            reached_subset = frozenset().union(*(
                second.advance_set(subset, state, arc_op, succ)
                for arc_op in sorted(kts.operations(state, succ))))
            for reached in sorted(reached_configs):
                nxt = (succ, reached, reached_subset)
                if nxt in parents:
                    continue
                note_subset(reached_subset)
                parents[nxt] = (node, (state, op, succ))
                if reached == first.final and second.final not in reached_subset:
                    return _trace(parents, nxt)
                queue.append(nxt)
    return None


def check(kts, requirement, label=None, determinization_limit=DEFAULT_DETERMINIZATION_LIMIT):
    """
    Check one requirement against a KTS.

    Args:
        kts: KTS from build_kts
        requirement: Requirement or LabeledRequirement
        label: Label for the verdict when requirement is unlabelled
        determinization_limit: Subset states allowed per constraint check

    Returns:
        Verdict
    """
    if isinstance(requirement, LabeledRequirement):
        label = requirement.label if label is None else label
        requirement = requirement.requirement
    label = label or ''

    if isinstance(requirement, Exists):
        witness = _find_flow(kts, requirement.kind)
        if witness is None:
            return Verdict(label, requirement, Outcome.VIOLATED,
                           detail=f"no flow of kind {requirement.kind}")
        return Verdict(label, requirement, Outcome.SATISFIED, witness)

    if isinstance(requirement, Prohibit):
        witness = _find_flow(kts, requirement.kind)
        if witness is None:
            return Verdict(label, requirement, Outcome.SATISFIED)
        return Verdict(label, requirement, Outcome.VIOLATED, witness,
                       detail=f"forbidden flow of kind {requirement.kind}")

    if isinstance(requirement, Constraint):
        try:
            witness = _find_counterexample(kts, requirement.antecedent,
                                           requirement.consequent, determinization_limit)
        except DeterminizationLimitExceeded as e:
            message = (f"({label}) determinization of {requirement.consequent} exceeded "
                       f"{determinization_limit} subset states ({e.subsets} reached)")
            logger.warning(message)
            return Verdict(label, requirement, Outcome.UNKNOWN, detail=message)
        if witness is None:
            return Verdict(label, requirement, Outcome.SATISFIED)
        return Verdict(label, requirement, Outcome.VIOLATED, witness,
                       detail=f"flow of kind {requirement.antecedent} "
                              f"without kind {requirement.consequent}")

    raise TypeError(f"not a requirement: {requirement!r}")
