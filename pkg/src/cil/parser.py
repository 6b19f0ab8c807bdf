#!/usr/bin/env python3
"""
CIL reader
----------
Reads the type-enforcement fragment of CIL into a RuleSet. The text is first
split into s-expressions by a small tokenizer that keeps line numbers and
treats ;IFL; ... ;IFL; as a single token; the s-expressions are then turned
into located rules.
"""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import List

from src.cil.model import (SELF, Allow, AttrAll, AttrAnd, AttrName, AttrNot,
                           AttrOr, AttrXor, BlockDecl, BlockInherit, Call,
                           IflRequirement, LocatedRule, MacroDecl, RuleSet,
                           TypeAttrDecl, TypeAttributeSet, TypeDecl,
                           Unsupported)
from src.cil.names import GLOBAL, QualifiedName
from src.ifl.kinds import Refinement
from src.ifl.parser import parse_ifl
from src.utils.errors import CilSyntaxError, InputError
from src.utils.logger import get_logger

logger = get_logger(__name__)

IFL_MARKER = ';IFL;'

_TOKEN = re.compile(r'''
    (?P<ifl>;IFL;)
  | (?P<comment>;[^\n]*)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<space>\s+)
  | (?P<atom>[^\s();"]+)
''', re.VERBOSE)


@dataclass
class SList:
    """A parenthesized form with the line it starts on."""
    items: list
    line: int

    @property
    def keyword(self):
        if self.items and isinstance(self.items[0], str):
            return self.items[0]
        return None


@dataclass
class Island:
    """The text between two ;IFL; markers."""
    text: str
    line: int


def read_sexprs(text):
    """
    Split text into top-level s-expressions.

    Args:
        text: CIL source

    Returns:
        List of SList and Island items
    """
    stack: List[SList] = [SList([], 1)]
    pos = 0
    line = 1
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise CilSyntaxError(f"unexpected character {text[pos]!r}", line)
        kind = match.lastgroup
        value = match.group()
        if kind == 'ifl':
            end = text.find(IFL_MARKER, match.end())
            if end < 0:
                raise CilSyntaxError("unterminated ;IFL; annotation", line)
            body = text[match.end():end]
            stack[-1].items.append(Island(body, line))
            line += body.count('\n')
            pos = end + len(IFL_MARKER)
            continue
        if kind == 'open':
            form = SList([], line)
            stack[-1].items.append(form)
            stack.append(form)
        elif kind == 'close':
            if len(stack) == 1:
                raise CilSyntaxError("unbalanced parentheses: unexpected ')'", line)
            stack.pop()
        elif kind in ('atom', 'string'):
            stack[-1].items.append(value)
        line += value.count('\n')
        pos = match.end()

    if len(stack) > 1:
        raise CilSyntaxError(
            f"unbalanced parentheses: '(' opened at line {stack[-1].line} is never closed", line)
    for item in stack[0].items:
        if isinstance(item, str):
            raise CilSyntaxError(f"unexpected atom '{item}' at top level")
    return stack[0].items


def render_sexpr(item):
    """Single-line concrete form of an s-expression."""
    if isinstance(item, str):
        return item
    if isinstance(item, Island):
        return f"{IFL_MARKER} {' '.join(item.text.split())} {IFL_MARKER}"
    return '(' + ' '.join(render_sexpr(i) for i in item.items) + ')'


class _RuleBuilder:
    """Turns s-expressions into located rules, tracking namespaces."""

    def __init__(self, warnings):
        self.located = []
        self.declared = set()
        self.warnings = warnings

    def _warn(self, message):
        logger.warning(message)
        self.warnings.append(message)

    def build(self, items, namespace):
        for item in items:
            if isinstance(item, Island):
                self._island(item, namespace)
            elif isinstance(item, SList):
                self._form(item, namespace)
            else:
                raise CilSyntaxError(f"unexpected atom '{item}' where a rule was expected")

    def _add(self, namespace, rule):
        self.located.append(LocatedRule(namespace, rule))

    def _island(self, island, namespace):
        parsed = parse_ifl(island.text, island.line)
        if isinstance(parsed, Refinement):
            raise CilSyntaxError(
                f"refinement ({parsed.new_label}:{parsed.target}) outside a call or blockinherit",
                island.line)
        self._add(namespace, IflRequirement(parsed.label, parsed.requirement))

    def _declare(self, namespace, name, line):
        key = (namespace, name)
        if key in self.declared:
            raise CilSyntaxError(
                f"duplicate declaration of '{name}' in namespace {namespace.display()}", line)
        self.declared.add(key)

    def _form(self, form, namespace):
        keyword = form.keyword
        if keyword is None:
            raise CilSyntaxError("a rule must start with a keyword", form.line)
        handler = getattr(self, f'_rule_{keyword}', None)
        if handler is None:
            self._warn(f"line {form.line}: skipping unsupported construct '{keyword}'")
            self._add(namespace, Unsupported(keyword, render_sexpr(form)))
            return
        handler(form, namespace, form.items[1:])

    # Declarations

    def _rule_block(self, form, namespace, args):
        if not args:
            raise CilSyntaxError("block without a name", form.line)
        name = _identifier(args[0], form.line)
        self._declare(namespace, name, form.line)
        self._add(namespace, BlockDecl(name))
        self.build(args[1:], namespace.child(name))

    def _rule_type(self, form, namespace, args):
        name = self._single_name(form, args)
        self._declare(namespace, name, form.line)
        self._add(namespace, TypeDecl(name))

    def _rule_typeattribute(self, form, namespace, args):
        name = self._single_name(form, args)
        self._declare(namespace, name, form.line)
        self._add(namespace, TypeAttrDecl(name))

    def _single_name(self, form, args):
        if len(args) != 1:
            raise CilSyntaxError(f"({form.keyword} ...) takes exactly one name", form.line)
        return _identifier(args[0], form.line)

    def _rule_macro(self, form, namespace, args):
        if len(args) < 2:
            raise CilSyntaxError("macro needs a name and a parameter list", form.line)
        name = _identifier(args[0], form.line)
        params = _macro_params(args[1], form.line)
        self._declare(namespace, name, form.line)
        self._add(namespace, MacroDecl(name, params))
        self.build(args[2:], namespace.child(name))

    # Commands

    def _rule_allow(self, form, namespace, args):
        if len(args) != 3:
            raise CilSyntaxError("allow takes a source, a target and a permission form", form.line)
        src = _name(args[0], form.line)
        dst = SELF if args[1] == 'self' else _name(args[1], form.line)
        perms = args[2]
        if (not isinstance(perms, SList) or len(perms.items) != 2
                or not isinstance(perms.items[0], str) or not isinstance(perms.items[1], SList)):
            self._warn(f"line {form.line}: permission sets given by name are not expanded; "
                       f"skipping {render_sexpr(form)}")
            self._add(namespace, Unsupported('allow', render_sexpr(form)))
            return
        ops = perms.items[1].items
        if not ops or not all(isinstance(op, str) for op in ops):
            raise CilSyntaxError("malformed permission list", form.line)
        self._add(namespace, Allow(src, dst, perms.items[0], frozenset(ops)))

    def _rule_typeattributeset(self, form, namespace, args):
        if len(args) != 2:
            raise CilSyntaxError("typeattributeset takes a name and an expression", form.line)
        self._add(namespace, TypeAttributeSet(_name(args[0], form.line),
                                              _attr_expr(args[1], form.line)))

    def _rule_call(self, form, namespace, args):
        if not args:
            raise CilSyntaxError("call without a macro name", form.line)
        macro = _name(args[0], form.line)
        rest = args[1:]
        call_args = ()
        if rest and isinstance(rest[0], SList):
            call_args = tuple(_name(a, form.line) for a in rest[0].items)
            rest = rest[1:]
        self._add(namespace, Call(macro, call_args, self._refinements(rest, form)))

    def _rule_blockinherit(self, form, namespace, args):
        if not args:
            raise CilSyntaxError("blockinherit without a block name", form.line)
        block = _name(args[0], form.line)
        self._add(namespace, BlockInherit(block, self._refinements(args[1:], form)))

    def _refinements(self, items, form):
        refinements = []
        for item in items:
            if not isinstance(item, Island):
                raise CilSyntaxError(
                    f"unexpected {render_sexpr(item)} in ({form.keyword} ...)", form.line)
            parsed = parse_ifl(item.text, item.line)
            if not isinstance(parsed, Refinement):
                raise CilSyntaxError(
                    f"requirement ({parsed.label}) inside ({form.keyword} ...) must refine a label",
                    item.line)
            refinements.append(parsed)
        return tuple(refinements)


def _identifier(item, line):
    if not isinstance(item, str) or not re.match(r'^[A-Za-z0-9_]+$', item):
        raise CilSyntaxError(f"expected an identifier, found {render_sexpr(item)}", line)
    return item


def _name(item, line):
    if not isinstance(item, str):
        raise CilSyntaxError(f"expected a name, found {render_sexpr(item)}", line)
    try:
        return QualifiedName.parse(item)
    except ValueError as e:
        raise CilSyntaxError(str(e), line)


def _macro_params(item, line):
    if not isinstance(item, SList):
        raise CilSyntaxError("macro parameters must be a list", line)
    # (macro m (type x) ...) with a single bare parameter
    if item.items and isinstance(item.items[0], str):
        entries = [item]
    else:
        entries = item.items
    params = []
    for entry in entries:
        if not isinstance(entry, SList) or len(entry.items) != 2:
            raise CilSyntaxError(f"malformed macro parameter {render_sexpr(entry)}", line)
        kind, name = entry.items
        if kind != 'type':
            raise CilSyntaxError(f"macro parameter kind '{render_sexpr(kind)}' is not supported", line)
        params.append((kind, _identifier(name, line)))
    return tuple(params)


_BINARY = {'and': AttrAnd, 'or': AttrOr, 'xor': AttrXor}


def _attr_expr(item, line):
    if isinstance(item, str):
        return AttrName(_name(item, line))
    if not isinstance(item, SList) or not item.items:
        raise CilSyntaxError("empty attribute expression", line)
    head = item.keyword
    operands = item.items[1:]
    if head in _BINARY:
        if len(operands) < 2:
            raise CilSyntaxError(f"'{head}' needs two operands", line)
        return _fold(_BINARY[head], [_attr_expr(o, line) for o in operands])
    if head == 'not':
        if len(operands) != 1:
            raise CilSyntaxError("'not' takes one operand", line)
        return AttrNot(_attr_expr(operands[0], line))
    if head == 'all' and not operands:
        return AttrAll()
    # a plain list of names is their union
    return _fold(AttrOr, [_attr_expr(i, line) for i in item.items])


def _fold(cls, exprs):
    result = exprs[-1]
    for expr in reversed(exprs[:-1]):
        result = cls(expr, result)
    return result


def parse_config(text, warnings=None):
    """
    Parse CIL text into a RuleSet.

    Args:
        text: CIL source, possibly annotated with ;IFL; islands
        warnings: Optional list collecting diagnostics

    Returns:
        RuleSet in document order
    """
    builder = _RuleBuilder(warnings if warnings is not None else [])
    builder.build(read_sexprs(text), GLOBAL)
    logger.debug(f"Parsed {len(builder.located)} located rules")
    return RuleSet(builder.located)


def parse_file(path, warnings=None):
    """Read and parse a UTF-8 CIL file."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}")
    return parse_config(text, warnings)
