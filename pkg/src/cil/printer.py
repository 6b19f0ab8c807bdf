"""
CIL printer
-----------
Renders a RuleSet back to nested concrete syntax. Anchored names keep their
leading dot and requirements are re-serialized as ;IFL; annotations.
"""

from collections import defaultdict

from src.cil.model import (Allow, BlockDecl, BlockInherit, Call,
                           IflRequirement, MacroDecl, TypeAttrDecl,
                           TypeAttributeSet, TypeDecl, Unsupported)
from src.cil.names import GLOBAL
from src.utils.logger import get_logger

logger = get_logger(__name__)

INDENT = '  '


def render_rule(rule):
    """One-line rendering of a rule without its body."""
    if isinstance(rule, TypeDecl):
        return f"(type {rule.name})"
    if isinstance(rule, TypeAttrDecl):
        return f"(typeattribute {rule.name})"
    if isinstance(rule, BlockDecl):
        return f"(block {rule.name})"
    if isinstance(rule, MacroDecl):
        return f"(macro {rule.name} {_params(rule)})"
    if isinstance(rule, Allow):
        perms = ' '.join(sorted(rule.perms))
        return f"(allow {rule.src} {rule.dst} ({rule.cls} ({perms})))"
    if isinstance(rule, TypeAttributeSet):
        return f"(typeattributeset {rule.attr} {rule.expr})"
    if isinstance(rule, IflRequirement):
        return f";IFL; ({rule.label}) {rule.requirement} ;IFL;"
    if isinstance(rule, Call):
        head = f"(call {rule.macro} ({' '.join(str(a) for a in rule.args)})"
        return _with_refinements(head, rule.refinements)
    if isinstance(rule, BlockInherit):
        return _with_refinements(f"(blockinherit {rule.block}", rule.refinements)
    if isinstance(rule, Unsupported):
        return rule.raw
    raise TypeError(f"cannot render {rule!r}")


def _params(macro):
    return '(' + ' '.join(f"({kind} {name})" for kind, name in macro.params) + ')'


def _with_refinements(head, refinements):
    islands = ''.join(f" ;IFL; {r} ;IFL;" for r in refinements)
    return f"{head}{islands})"


def render_config(rules):
    """
    Render a RuleSet as CIL text.

    Args:
        rules: RuleSet to print

    Returns:
        Text that parses back to an equal RuleSet
    """
    children = defaultdict(list)
    for located in rules:
        children[located.namespace].append(located.rule)

    lines = []
    visited = set()
    _render_namespace(GLOBAL, children, 0, lines, visited)

    orphans = [ns for ns in children if ns not in visited]
    for namespace in orphans:
        logger.warning(f"rules under undeclared namespace {namespace} are not printed")
    return '\n'.join(lines) + '\n' if lines else ''


def _render_namespace(namespace, children, depth, lines, visited):
    visited.add(namespace)
    pad = INDENT * depth
    for rule in children.get(namespace, []):
        if isinstance(rule, (BlockDecl, MacroDecl)):
            head = f"(block {rule.name}" if isinstance(rule, BlockDecl) \
                else f"(macro {rule.name} {_params(rule)}"
            inner = namespace.child(rule.name)
            if not children.get(inner):
                visited.add(inner)
                lines.append(f"{pad}{head})")
                continue
            lines.append(f"{pad}{head}")
            _render_namespace(inner, children, depth + 1, lines, visited)
            lines[-1] += ')'
        else:
            lines.append(pad + render_rule(rule))
