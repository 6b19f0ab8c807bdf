"""
NuSMV emission
--------------
Writes a configuration as a NuSMV model: the KTS extended with a sink state,
typeattributes as DEFINE predicates and one LTLSPEC per requirement.
"""

import re
from dataclasses import dataclass

from src.cil.model import AttrAll, AttrAnd, AttrName, AttrNot, AttrOr, AttrXor
from src.ifl.kinds import WILDCARD, Constraint, Exists, Prohibit
from src.utils.errors import EmissionError
from src.utils.logger import get_logger
from src.verifier.ltl import (And, Next, Not, OpProp, Or, SinkProp, StateProp,
                              TrueF, Until, requirement_formula)

logger = get_logger(__name__)

SINK = 'sink'

# Placeholder operation when the diagram has none; NuSMV rejects empty enums.
NO_OPERATION = 'no_operation'

_IDENTIFIER = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')

RESERVED = frozenset({
    'MODULE', 'DEFINE', 'VAR', 'IVAR', 'TRANS', 'INIT', 'INVAR', 'LTLSPEC',
    'SPEC', 'TRUE', 'FALSE', 'next', 'init', 'case', 'esac', 'self', 'mod',
    'xor', 'xnor', 'union', 'in', 'X', 'F', 'G', 'U', 'V', 'Y', 'Z', 'H',
    'O', 'S', 'T', 'type', 'operation', 'boolean', 'integer', 'word', 'array',
})


def mangle(name):
    """'.A.b' -> 'A_b'."""
    return '_'.join(name.path)


class NameTable:
    """
    NuSMV identifiers for types, typeattributes and operations.

    rename maps a dotted name without the leading dot ('A.b') or an operation
    to the identifier to use instead.
    """

    def __init__(self, nodes, ops=(), rename=None):
        rename = dict(rename or {})
        self.identifiers = {}
        owners = {}
        for node in sorted(nodes):
            dotted = '.'.join(node.path)
            ident = str(rename.get(dotted, mangle(node)))
            self._validate(ident, f"type '{node}'")
            if ident in owners:
                raise EmissionError(f"'{node}' and '{owners[ident]}' both map to NuSMV identifier "
                                    f"'{ident}'; set nusmv.rename to tell them apart")
            owners[ident] = node
            self.identifiers[node] = ident
        self.ops = {}
        for op in sorted(ops):
            ident = str(rename.get(op, op))
            self._validate(ident, f"operation '{op}'")
            self.ops[op] = ident
        self.renamed = {node: ident for node, ident in self.identifiers.items()
                        if ident != '.'.join(node.path)}

    @staticmethod
    def _validate(ident, what):
        if ident == SINK:
            raise EmissionError(f"{what} collides with the sink state '{SINK}'; "
                                "set nusmv.rename to map it to another identifier")
        if not _IDENTIFIER.match(ident) or ident in RESERVED:
            raise EmissionError(f"{what} is not usable as NuSMV identifier '{ident}'; "
                                "set nusmv.rename to map it to another identifier")

    def __getitem__(self, node):
        return self.identifiers[node]


@dataclass(frozen=True)
class SinkKTS:
    """A KTS plus the sink state, reachable from every state by every operation."""

    kts: object
    names: NameTable

    @property
    def states(self):
        return (SINK,) + self.kts.states

    @property
    def actions(self):
        return self.kts.actions

    def successors(self, state):
        sink_steps = [(op, SINK) for op in self.actions]
        if state == SINK:
            return sink_steps
        return self.kts.successors(state) + sink_steps


def add_sink(kts, rename=None):
    """
    Extend a KTS with the sink state.

    Raises:
        EmissionError: A state or typeattribute name cannot be emitted
    """
    names = NameTable(tuple(kts.states) + tuple(sorted(kts.attributes)), kts.actions, rename)
    return SinkKTS(kts, names)


class _Renderer:
    def __init__(self, names, types):
        self.names = names
        self.types = types

    def node(self, node):
        if node == WILDCARD:
            return f"!(type={SINK})"
        if node in self.types:
            return f"type={self.names[node]}"
        return self.names[node]

    def ops(self, ops):
        if ops is None:
            return 'TRUE'
        terms = [f"operation={self.names.ops[op]}" for op in sorted(ops)]
        return terms[0] if len(terms) == 1 else '(' + ' | '.join(terms) + ')'

    @staticmethod
    def _atomic(formula):
        return isinstance(formula, (StateProp, OpProp, SinkProp, TrueF))

    def formula(self, f):
        if isinstance(f, TrueF):
            return 'TRUE'
        if isinstance(f, StateProp):
            return self.node(f.node)
        if isinstance(f, OpProp):
            return self.ops(f.ops)
        if isinstance(f, SinkProp):
            return f"type={SINK}"
        if isinstance(f, Not):
            return f"!({self.formula(f.arg)})"
        if isinstance(f, And):
            args = [a for a in f.args if not (isinstance(a, OpProp) and a.ops is None)]
            return ' & '.join(self.formula(a) for a in args)
        if isinstance(f, Or):
            parts = [f"({self.formula(a)})" if isinstance(a, And) else self.formula(a)
                     for a in f.args]
            return '(' + ' | '.join(parts) + ')'
        if isinstance(f, Next):
            return f"X({self.formula(f.arg)})"
        if isinstance(f, Until):
            right = self.formula(f.right)
            if isinstance(f.left, OpProp) and f.left.ops is None:
                return f"F {right}" if self._atomic(f.right) else f"F({right})"
            return f"(({self.formula(f.left)}) U ({right}))"
        raise TypeError(f"not a formula: {f!r}")

    def attribute(self, expr):
        if isinstance(expr, AttrName):
            return self.node(expr.name)
        if isinstance(expr, AttrAll):
            return 'TRUE'
        if isinstance(expr, AttrNot):
            return f"!({self.attribute(expr.operand)})"
        op = {AttrAnd: '&', AttrOr: '|', AttrXor: 'xor'}[type(expr)]
        return f"({self.attribute(expr.left)} {op} {self.attribute(expr.right)})"


def _define_body(renderer, graph, attr):
    if attr in graph.cyclic:
        members = sorted(graph.ta[attr])
        if not members:
            return 'FALSE'
        return ' | '.join(f"type={renderer.names[t]}" for t in members)
    exprs = graph.attr_exprs.get(attr, [])
    if not exprs:
        return 'FALSE'
    rendered = [renderer.attribute(e) for e in exprs]
    return rendered[0] if len(rendered) == 1 else '(' + ' | '.join(rendered) + ')'


def emit(sink_kts, requirements, graph, compact_constraints=False):
    """
    Render the NuSMV model.

    Args:
        sink_kts: SinkKTS from add_sink
        requirements: LabeledRequirements; LTLSPECs follow emission_order
        graph: Graph providing typeattribute definitions
        compact_constraints: Drop the end-of-path marker in constraints

    Returns:
        Model text
    """
    names = sink_kts.names
    renderer = _Renderer(names, set(sink_kts.kts.states))
    lines = []
    if names.renamed:
        lines.append('-- identifiers for qualified names')
        for node, ident in sorted(names.renamed.items()):
            lines.append(f"--   {ident} = {node}")
        lines.append('')

    lines.append('MODULE main')
    lines.append('')
    attributes = sorted(a for a in graph.attributes if a in names.identifiers)
    if attributes:
        lines.append('DEFINE')
        for attr in attributes:
            body = _define_body(renderer, graph, attr)
            lines.append(f"  {names[attr]} := ({body}) & !(type={SINK});")

    lines.append('VAR')
    states = [SINK] + [names[s] for s in sink_kts.kts.states]
    lines.append(f"  type : {{ {', '.join(states)} }};")
    lines.append('')

    lines.append('IVAR')
    ops = [names.ops[op] for op in sink_kts.actions] or [NO_OPERATION]
    lines.append(f"  operation : {{ {', '.join(ops)} }};")
    lines.append('')

    lines.append('TRANS')
    for state in sink_kts.kts.states:
        moves = [f"(operation={names.ops[op]} & next(type={names[succ]}))"
                 for op, succ in sink_kts.kts.successors(state)]
        moves.append(f"next(type={SINK})")
        lines.append(f"  (type={names[state]} -> ({' | '.join(moves)})) &")
    lines.append(f"  (type={SINK} -> next(type={SINK}))")
    lines.append('')

    for labeled in emission_order(requirements):
        formula = requirement_formula(labeled.requirement, compact_constraints)
        lines.append(f"LTLSPEC {renderer.formula(formula)}")

    logger.info(f"Emitted NuSMV model with {len(states)} states and "
                f"{len(requirements)} specifications")
    return '\n'.join(lines) + '\n'


def emission_order(requirements):
    """Constraints first, then existence, then prohibition requirements, each in report order."""
    rank = {Constraint: 0, Exists: 1, Prohibit: 2}
    return sorted(requirements, key=lambda labeled: rank[type(labeled.requirement)])


def expects_counterexample(requirement):
    """True if the requirement holds exactly when its LTLSPEC is false."""
    return isinstance(requirement, Exists)
