"""
Graph semantics
---------------
A normalized configuration denotes a directed graph whose nodes are the types
and typeattributes declared outside macros, whose arcs carry the operations
allow rules grant, and where every typeattribute stands for a set of types.
"""

from dataclasses import dataclass, field

import networkx as nx

from src.cil.model import (SELF, Allow, AttrAll, AttrAnd, AttrName, AttrNot,
                           AttrOr, AttrXor, IflRequirement, TypeAttrDecl,
                           TypeAttributeSet, TypeDecl, semantic_rules)
from src.ifl.kinds import LabeledRequirement, named_nodes
from src.utils.errors import SemanticsError
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class Graph:
    """
    Permission graph.

    arcs is a networkx DiGraph whose edges carry 'ops', a dict from operation
    to the set of classes it was granted on.
    """

    types: set = field(default_factory=set)
    attributes: set = field(default_factory=set)
    ta: dict = field(default_factory=dict)
    arcs: nx.DiGraph = field(default_factory=nx.DiGraph)
    attr_exprs: dict = field(default_factory=dict)
    cyclic: set = field(default_factory=set)

    @property
    def nodes(self):
        return self.types | self.attributes

    def add_ops(self, src, dst, ops):
        """Merge {op: classes} into the arc src -> dst."""
        if not self.arcs.has_edge(src, dst):
            self.arcs.add_edge(src, dst, ops={})
        merged = self.arcs[src][dst]['ops']
        for op, classes in ops.items():
            merged[op] = merged.get(op, frozenset()) | frozenset(classes)

    def arc_set(self):
        """Arcs as (src, frozenset of ops, dst) triples."""
        return {(u, frozenset(d['ops']), v) for u, v, d in self.arcs.edges(data=True)}

    def close(self):
        """Propagate every arc to the member types of its endpoints."""
        for src, dst, data in list(self.arcs.edges(data=True)):
            ops = dict(data['ops'])
            for t1 in self.ta[src]:
                for t2 in self.ta[dst]:
                    self.add_ops(t1, t2, ops)


class _AttributeEvaluator:
    """
    Evaluates typeattribute definitions over the declared types.

    A reference back to an attribute still being evaluated yields the empty
    set, and every value computed is kept, so the outcome depends only on the
    order attributes are visited in (declaration order).
    """

    def __init__(self, types, attributes, definitions):
        self.types = frozenset(types)
        self.attributes = attributes
        self.definitions = definitions
        self.values = {}
        self._stack = []

    def dependency_graph(self):
        deps = nx.DiGraph()
        deps.add_nodes_from(self.attributes)
        for attr, exprs in self.definitions.items():
            for expr in exprs:
                for leaf in expr.leaves():
                    if leaf in self.attributes:
                        deps.add_edge(attr, leaf)
        return deps

    def evaluate(self, attr):
        if attr in self.values:
            return self.values[attr]
        if attr in self._stack:
            return frozenset()
        self._stack.append(attr)
        members = frozenset()
        for expr in self.definitions.get(attr, []):
            members |= self._expr(expr)
        self._stack.pop()
        self.values[attr] = members
        return members

    def _expr(self, expr):
        if isinstance(expr, AttrName):
            if expr.name in self.attributes:
                return self.evaluate(expr.name)
            return frozenset([expr.name])
        if isinstance(expr, AttrAll):
            return self.types
        if isinstance(expr, AttrNot):
            return self.types - self._expr(expr.operand)
        left, right = self._expr(expr.left), self._expr(expr.right)
        if isinstance(expr, AttrAnd):
            return left & right
        if isinstance(expr, AttrOr):
            return left | right
        if isinstance(expr, AttrXor):
            return left ^ right
        raise TypeError(f"unknown attribute expression {expr!r}")


def _declarations(rules):
    types, attributes = [], []
    for located in semantic_rules(rules):
        if isinstance(located.rule, TypeDecl):
            types.append(located.namespace.child(located.rule.name))
        elif isinstance(located.rule, TypeAttrDecl):
            attributes.append(located.namespace.child(located.rule.name))
    return types, attributes


def _definitions(rules, types, attributes):
    nodes = set(types) | set(attributes)
    definitions = {}
    for located in semantic_rules(rules):
        rule = located.rule
        if not isinstance(rule, TypeAttributeSet):
            continue
        if rule.attr not in attributes:
            raise SemanticsError(f"typeattributeset in {located.namespace.display()} "
                                 f"sets {rule.attr}, which is not a typeattribute")
        for leaf in rule.expr.leaves():
            if leaf not in nodes:
                raise SemanticsError(f"typeattributeset {rule.attr} references "
                                     f"undeclared {leaf}")
        definitions.setdefault(rule.attr, []).append(rule.expr)
    return definitions


def _evaluate_attributes(rules, warnings):
    types, attributes = _declarations(rules)
    definitions = _definitions(rules, types, attributes)
    evaluator = _AttributeEvaluator(types, set(attributes), definitions)

    cyclic = set()
    deps = evaluator.dependency_graph()
    for component in sorted(nx.strongly_connected_components(deps), key=lambda c: sorted(c)):
        members = sorted(component)
        if len(members) == 1 and not deps.has_edge(members[0], members[0]):
            continue
        cyclic.update(members)
        message = (f"typeattributes defined in terms of each other: "
                   f"{' -> '.join(str(m) for m in members + members[:1])}; "
                   "memberships approximated by evaluating re-entrant references as empty")
        logger.warning(message)
        warnings.append(message)

    ta = {attr: evaluator.evaluate(attr) for attr in attributes}
    return types, attributes, ta, definitions, cyclic


def resolve_typeattributes(rules, warnings=None):
    """
    Evaluate typeattribute memberships of a normalized configuration.

    Args:
        rules: Normalized RuleSet
        warnings: Optional list collecting diagnostics

    Returns:
        (dict from typeattribute to frozenset of types, list of warnings)
    """
    warnings = warnings if warnings is not None else []
    _, _, ta, _, _ = _evaluate_attributes(rules, warnings)
    return ta, warnings


def build_graph(rules, warnings=None):
    """
    Build the permission graph of a normalized configuration.

    Args:
        rules: Normalized RuleSet
        warnings: Optional list collecting diagnostics

    Returns:
        Graph closed under typeattribute membership
    """
    warnings = warnings if warnings is not None else []
    types, attributes, attr_ta, definitions, cyclic = _evaluate_attributes(rules, warnings)

    graph = Graph(types=set(types), attributes=set(attributes),
                  attr_exprs=definitions, cyclic=cyclic)
    graph.ta = {t: frozenset([t]) for t in types}
    graph.ta.update(attr_ta)
    graph.arcs.add_nodes_from(sorted(graph.nodes))

    for located in semantic_rules(rules):
        rule = located.rule
        if not isinstance(rule, Allow):
            continue
        for name in (rule.src, rule.dst):
            if name != SELF and name not in graph.ta:
                raise SemanticsError(f"allow in {located.namespace.display()} "
                                     f"references undeclared {name}")
        ops = {op: {rule.cls} for op in rule.perms}
        if rule.dst == SELF:
            for member in graph.ta[rule.src]:
                graph.add_ops(member, member, ops)
        else:
            graph.add_ops(rule.src, rule.dst, ops)

    graph.close()
    logger.info(f"Graph: {len(graph.types)} types, {len(graph.attributes)} typeattributes, "
                f"{graph.arcs.number_of_edges()} arcs")
    return graph


def requirement_label(namespace, label):
    """Report label of a requirement: plain at the global level, prefixed in blocks."""
    if namespace.is_global:
        return label
    return f"{'.'.join(namespace.path)}.{label}"


def collect_requirements(rules, graph=None):
    """
    Requirements of a normalized configuration, in document order.

    Args:
        rules: Normalized RuleSet
        graph: Graph of rules; built when omitted

    Returns:
        List of LabeledRequirement
    """
    if graph is None:
        graph = build_graph(rules)
    collected = []
    for located in semantic_rules(rules):
        rule = located.rule
        if not isinstance(rule, IflRequirement):
            continue
        label = requirement_label(located.namespace, rule.label)
        for node in named_nodes(rule.requirement):
            if node not in graph.ta:
                raise SemanticsError(f"requirement ({label}) names undeclared {node}")
        collected.append(LabeledRequirement(label, rule.requirement))
    return collected
