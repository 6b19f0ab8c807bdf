"""
IFL kinds and requirements
--------------------------
A kind is a chain of arrow segments between nodes. Requirements ask for the
existence of a flow of some kind, forbid it, or constrain every flow of one
kind to also have another kind.
"""

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional, Tuple, Union

from src.cil.names import QualifiedName


@dataclass(frozen=True)
class Wildcard:
    """The '*' node: any node representing a type."""

    def __str__(self):
        return '*'


WILDCARD = Wildcard()

NodeRef = Union[QualifiedName, Wildcard]

# None stands for the full operation set.
Ops = Optional[FrozenSet[str]]


class Arrow(Enum):
    SINGLE = 'single'
    MULTI = 'multi'


def ops_subset(inner, outer):
    """inner is contained in outer."""
    if outer is None:
        return True
    return inner is not None and inner <= outer


def ops_meet(first, second):
    """Intersection; may return an empty frozenset."""
    if first is None:
        return second
    if second is None:
        return first
    return first & second


def ops_join(first, second):
    if first is None or second is None:
        return None
    return first | second


def ops_overlap(arc_ops, kind_ops):
    """True if some operation of an arc is admitted by a kind's filter."""
    if kind_ops is None:
        return bool(arc_ops)
    return bool(arc_ops & kind_ops)


def render_ops(ops):
    return '' if ops is None else '[' + ' '.join(sorted(ops)) + ']'


@dataclass(frozen=True)
class Segment:
    src: NodeRef
    arrow: Arrow
    ops: Ops
    dst: NodeRef

    def __post_init__(self):
        if self.ops is not None and not self.ops:
            raise ValueError("empty operation set")

    @property
    def multi(self):
        return self.arrow is Arrow.MULTI

    def arrow_text(self):
        plus = '+' if self.multi else ''
        return f"{plus}{render_ops(self.ops)}>"


@dataclass(frozen=True)
class Kind:
    segments: Tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a kind needs at least one segment")
        for left, right in zip(self.segments, self.segments[1:]):
            if left.dst != right.src:
                raise ValueError("adjacent segments must share their node")

    @classmethod
    def chain(cls, nodes, steps):
        """
        Build a kind from boundary nodes and the steps between them.

        Args:
            nodes: n + 1 node references
            steps: n pairs (Arrow, ops)
        """
        if len(nodes) != len(steps) + 1:
            raise ValueError("a chain needs one more node than steps")
        return cls(tuple(Segment(nodes[i], arrow, ops, nodes[i + 1])
                         for i, (arrow, ops) in enumerate(steps)))

    @property
    def nodes(self):
        return (self.segments[0].src,) + tuple(s.dst for s in self.segments)

    @property
    def steps(self):
        return tuple((s.arrow, s.ops) for s in self.segments)

    def __len__(self):
        return len(self.segments)

    def map_nodes(self, fn):
        return Kind.chain([fn(n) for n in self.nodes], self.steps)

    def __str__(self):
        parts = [str(self.segments[0].src)]
        for segment in self.segments:
            parts.append(segment.arrow_text())
            parts.append(str(segment.dst))
        return ' '.join(parts)


@dataclass(frozen=True)
class Exists:
    kind: Kind

    def kinds(self):
        return (self.kind,)

    def map_nodes(self, fn):
        return Exists(self.kind.map_nodes(fn))

    def __str__(self):
        return str(self.kind)


@dataclass(frozen=True)
class Prohibit:
    kind: Kind

    def kinds(self):
        return (self.kind,)

    def map_nodes(self, fn):
        return Prohibit(self.kind.map_nodes(fn))

    def __str__(self):
        return f"~ {self.kind}"


@dataclass(frozen=True)
class Constraint:
    antecedent: Kind
    consequent: Kind

    def kinds(self):
        return (self.antecedent, self.consequent)

    def map_nodes(self, fn):
        return Constraint(self.antecedent.map_nodes(fn),
                          self.consequent.map_nodes(fn))

    def __str__(self):
        return f"{self.antecedent} : {self.consequent}"


Requirement = Union[Exists, Prohibit, Constraint]


@dataclass(frozen=True)
class LabeledRequirement:
    label: str
    requirement: Requirement

    def __str__(self):
        return f"({self.label}) {self.requirement}"


@dataclass(frozen=True)
class Refinement:
    """
    A refining annotation inside a call or blockinherit.

    target is a label of the callee ('l'), or a dotted path to a label of the
    inherited block ('rho.l').
    """

    new_label: str
    target: str
    requirement: Requirement

    def __str__(self):
        return f"({self.new_label}:{self.target}) {self.requirement}"


def named_nodes(requirement):
    """Every QualifiedName occurring in a requirement, in order."""
    found = []
    for kind in requirement.kinds():
        found.extend(n for n in kind.nodes if isinstance(n, QualifiedName))
    return found


def substitute(requirement, binding):
    """
    Replace parameter nodes by their arguments.

    Args:
        requirement: Requirement to instantiate
        binding: dict from formal parameter name to QualifiedName

    Returns:
        Requirement with every bound parameter replaced
    """
    if not binding:
        return requirement

    def bind(node):
        if (isinstance(node, QualifiedName) and not node.anchored
                and len(node.path) == 1 and node.last in binding):
            return binding[node.last]
        return node

    return requirement.map_nodes(bind)


def segment_count(requirement):
    return max(len(kind) for kind in requirement.kinds())
