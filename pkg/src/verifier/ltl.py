"""
LTL encoding of kinds
---------------------
Formulas are small immutable trees. encode_ltl follows the finite-path
encoding, where not-X-true marks the end of the path; encode_ltl_iota is the
variant for a KTS with a sink state, where the end of the path is a step into
the sink. requirement_formula gives the formula whose validity the external
model checker is asked about.
"""

from dataclasses import dataclass
from typing import Tuple

from src.ifl.kinds import WILDCARD, Constraint, Exists, Prohibit


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class StateProp:
    """Holds in a state labelled with node (any non-sink state for '*')."""

    node: object


@dataclass(frozen=True)
class OpProp:
    """Disjunction of operations; None for every operation."""

    ops: object


@dataclass(frozen=True)
class SinkProp:
    pass


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    args: Tuple


@dataclass(frozen=True)
class Or:
    args: Tuple


@dataclass(frozen=True)
class Next:
    arg: object


@dataclass(frozen=True)
class Until:
    left: object
    right: object


END_OF_PATH = Not(Next(TrueF()))
INTO_SINK = Next(SinkProp())


def _encode(segments, end):
    head, tail = segments[0], segments[1:]
    if tail:
        target = _encode(tail, end)
    elif end is None:
        target = StateProp(head.dst)
    else:
        target = And((StateProp(head.dst), end))
    if head.multi:
        target = Until(OpProp(head.ops), target)
    return And((StateProp(head.src), OpProp(head.ops), Next(target)))


def encode_ltl(kind):
    """Encoding over finite paths: the path ends where the kind ends."""
    return _encode(kind.segments, END_OF_PATH)


def encode_ltl_iota(kind, end_marker=True):
    """
    Encoding over a KTS extended with a sink state.

    Args:
        kind: Kind to encode
        end_marker: Require the step after the last node to enter the sink;
            without it any path with a matching prefix satisfies the formula
    """
    return _encode(kind.segments, INTO_SINK if end_marker else None)


def requirement_formula(requirement, compact_constraints=False):
    """
    Formula checked for validity on the sink-extended KTS.

    An existence requirement holds iff its formula is NOT valid; the others
    hold iff it is valid. Existence and prohibition never need the end
    marker; constraints use it unless compact_constraints is set.
    """
    if isinstance(requirement, (Exists, Prohibit)):
        return Not(encode_ltl_iota(requirement.kind, end_marker=False))
    if isinstance(requirement, Constraint):
        marker = not compact_constraints
        return Or((Not(encode_ltl_iota(requirement.antecedent, marker)),
                   encode_ltl_iota(requirement.consequent, marker)))
    raise TypeError(f"not a requirement: {requirement!r}")


def holds_on_path(formula, states, ops, labels, position=0):
    """
    Evaluate a formula on a finite KTS path.

    Args:
        formula: Formula tree
        states: s0 .. sn
        ops: op0 .. op(n-1), ops[i] taken from states[i]
        labels: Map from state to the names labelling it
        position: Index to evaluate at
    """
    last = len(states) - 1
    if isinstance(formula, TrueF):
        return True
    if isinstance(formula, StateProp):
        names = labels.get(states[position], ())
        return formula.node == WILDCARD or formula.node in names
    if isinstance(formula, OpProp):
        if position >= last:
            return False
        return formula.ops is None or ops[position] in formula.ops
    if isinstance(formula, SinkProp):
        return False
    if isinstance(formula, Not):
        return not holds_on_path(formula.arg, states, ops, labels, position)
    if isinstance(formula, And):
        return all(holds_on_path(a, states, ops, labels, position) for a in formula.args)
    if isinstance(formula, Or):
        return any(holds_on_path(a, states, ops, labels, position) for a in formula.args)
    if isinstance(formula, Next):
        return position < last and holds_on_path(formula.arg, states, ops, labels, position + 1)
    if isinstance(formula, Until):
        for k in range(position, last + 1):
            if holds_on_path(formula.right, states, ops, labels, k):
                return True
            if not holds_on_path(formula.left, states, ops, labels, k):
                return False
        return False
    raise TypeError(f"not a formula: {formula!r}")
