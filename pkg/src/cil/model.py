"""
Abstract model of CIL configurations
------------------------------------
A configuration is a set of located rules (namespace, rule). Block and macro
bodies are flattened: a rule inside (block A ...) at the top level is located
at the namespace .A.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Tuple

from src.cil.names import QualifiedName
from src.ifl.kinds import named_nodes

# (allow t self ...) targets each source type itself.
SELF = QualifiedName.relative('self')


# Attribute expressions

@dataclass(frozen=True)
class AttrName:
    name: QualifiedName

    def leaves(self):
        return [self.name]

    def map_names(self, fn):
        return AttrName(fn(self.name))

    def __str__(self):
        return str(self.name)


@dataclass(frozen=True)
class AttrAll:
    def leaves(self):
        return []

    def map_names(self, fn):
        return self

    def __str__(self):
        return '(all)'


@dataclass(frozen=True)
class AttrNot:
    operand: object

    def leaves(self):
        return self.operand.leaves()

    def map_names(self, fn):
        return AttrNot(self.operand.map_names(fn))

    def __str__(self):
        return f'(not {self.operand})'


@dataclass(frozen=True)
class _Binary:
    left: object
    right: object

    keyword = ''

    def leaves(self):
        return self.left.leaves() + self.right.leaves()

    def map_names(self, fn):
        return type(self)(self.left.map_names(fn), self.right.map_names(fn))

    def __str__(self):
        return f'({self.keyword} {self.left} {self.right})'


class AttrAnd(_Binary):
    keyword = 'and'


class AttrOr(_Binary):
    keyword = 'or'


class AttrXor(_Binary):
    keyword = 'xor'


# Rules

@dataclass(frozen=True)
class BlockDecl:
    name: str


@dataclass(frozen=True)
class TypeDecl:
    name: str


@dataclass(frozen=True)
class TypeAttrDecl:
    name: str


@dataclass(frozen=True)
class MacroDecl:
    name: str
    params: Tuple[Tuple[str, str], ...]

    @property
    def param_names(self):
        return tuple(name for _, name in self.params)


@dataclass(frozen=True)
class Allow:
    src: QualifiedName
    dst: QualifiedName
    cls: str
    perms: FrozenSet[str]


@dataclass(frozen=True)
class TypeAttributeSet:
    attr: QualifiedName
    expr: object


@dataclass(frozen=True)
class Call:
    macro: QualifiedName
    args: Tuple[QualifiedName, ...]
    refinements: tuple = ()


@dataclass(frozen=True)
class BlockInherit:
    block: QualifiedName
    refinements: tuple = ()


@dataclass(frozen=True)
class IflRequirement:
    label: str
    requirement: object


@dataclass(frozen=True)
class Unsupported:
    keyword: str
    raw: str


DECLARATION_KINDS = {
    BlockDecl: 'block',
    TypeDecl: 'type',
    TypeAttrDecl: 'typeattribute',
    MacroDecl: 'macro',
}


def declaration_kind(rule):
    """'block', 'type', 'typeattribute', 'macro' or None for non-declarations."""
    return DECLARATION_KINDS.get(type(rule))


def command_names(rule):
    """Names occurring in a command that resolution may rewrite."""
    if isinstance(rule, Allow):
        return [n for n in (rule.src, rule.dst) if n != SELF]
    if isinstance(rule, TypeAttributeSet):
        return [rule.attr] + rule.expr.leaves()
    if isinstance(rule, Call):
        return list(rule.args)
    if isinstance(rule, IflRequirement):
        return named_nodes(rule.requirement)
    return []


def map_command_names(rule, fn):
    """Rebuild a command with fn applied to every rewritable name."""
    if isinstance(rule, Allow):
        return Allow(rule.src if rule.src == SELF else fn(rule.src),
                     rule.dst if rule.dst == SELF else fn(rule.dst),
                     rule.cls, rule.perms)
    if isinstance(rule, TypeAttributeSet):
        return TypeAttributeSet(fn(rule.attr), rule.expr.map_names(fn))
    if isinstance(rule, Call):
        return Call(rule.macro, tuple(fn(a) for a in rule.args), rule.refinements)
    if isinstance(rule, IflRequirement):
        def node_fn(node):
            return fn(node) if isinstance(node, QualifiedName) else node
        return IflRequirement(rule.label, rule.requirement.map_nodes(node_fn))
    return rule


@dataclass(frozen=True)
class LocatedRule:
    namespace: QualifiedName
    rule: object

    def __str__(self):
        return f"({self.namespace.display()}, {self.rule})"


class RuleSet:
    """
    An ordered set of located rules.

    Iteration follows document order (insertion order); equality is set
    equality. Instances are treated as immutable: every rewrite builds a new
    RuleSet.
    """

    def __init__(self, located=()):
        self._rules = dict.fromkeys(located)

    def __iter__(self):
        return iter(self._rules)

    def __len__(self):
        return len(self._rules)

    def __contains__(self, located):
        return located in self._rules

    def __eq__(self, other):
        if not isinstance(other, RuleSet):
            return NotImplemented
        return self._rules.keys() == other._rules.keys()

    __hash__ = None

    def __repr__(self):
        return f"RuleSet({len(self)} rules)"

    def with_added(self, located):
        return RuleSet(list(self._rules) + list(located))

    def filter(self, predicate):
        return RuleSet(r for r in self._rules if predicate(r))

    @cached_property
    def by_namespace(self):
        """Map from namespace to the rules located exactly there, in document order."""
        grouped = {}
        for located in self._rules:
            grouped.setdefault(located.namespace, []).append(located.rule)
        return grouped

    def rules_at(self, namespace):
        return self.by_namespace.get(namespace, [])

    @cached_property
    def _declarations(self):
        decls = set()
        for located in self._rules:
            kind = declaration_kind(located.rule)
            if kind:
                decls.add((located.namespace.child(located.rule.name), kind))
        return decls

    @cached_property
    def macros(self):
        """Map from macro namespace to its MacroDecl."""
        return {r.namespace.child(r.rule.name): r.rule
                for r in self._rules if isinstance(r.rule, MacroDecl)}

    @cached_property
    def _namespaces_with_calls(self):
        return {r.namespace for r in self._rules if isinstance(r.rule, Call)}

    def declares(self, name, kind):
        """True if the anchored name is declared as an entity of kind."""
        return (name, kind) in self._declarations

    def contains_call(self, namespace):
        return namespace in self._namespaces_with_calls

    def in_macro(self, namespace):
        """True if namespace is a macro body or lies inside one."""
        enclosing = namespace
        while enclosing.path:
            if enclosing in self.macros:
                return True
            enclosing = enclosing.parent
        return False


def semantic_rules(rules):
    """Rules that carry meaning for the graph: outside macros, minus macro declarations."""
    return rules.filter(lambda r: not rules.in_macro(r.namespace)
                        and not isinstance(r.rule, MacroDecl))

