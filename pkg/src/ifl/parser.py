"""
Parser for ;IFL; annotations
----------------------------
Grammar for the interior of one annotation:

    island      ::= '(' label [':' target] ')' requirement
    requirement ::= '~' kind | '~' '(' kind ')' | kind [':' kind]
    kind        ::= node (arrow node)+
    arrow       ::= ['+'] ['[' op+ ']'] '>'
    node        ::= '*' | ['.'] ident ('.' ident)*
"""

import pyparsing

from src.cil.names import QualifiedName
from src.ifl.kinds import (WILDCARD, Arrow, Constraint, Exists, Kind,
                           LabeledRequirement, Prohibit, Refinement)
from src.utils.errors import IflSyntaxError

LPAR, RPAR, LBRACK, RBRACK, COLON, TILDE, COMMA = map(pyparsing.Suppress, "()[]:~,")

ident = pyparsing.Word(pyparsing.alphanums + "_")
dotted = pyparsing.Regex(r"[A-Za-z0-9_]+(?:\.[A-Za-z0-9_]+)*")
name = pyparsing.Regex(r"\.?[A-Za-z0-9_]+(?:\.[A-Za-z0-9_]+)*")
node = pyparsing.Literal("*") | name

op_list = pyparsing.Group(LBRACK + pyparsing.ZeroOrMore(ident + pyparsing.Optional(COMMA)) + RBRACK)
arrow = pyparsing.Group(
    pyparsing.Optional(pyparsing.Literal("+"))("plus")
    + pyparsing.Optional(op_list("ops"))
    + pyparsing.Suppress(">")
)
kind = pyparsing.Group(node + pyparsing.OneOrMore(arrow + node))

label = pyparsing.Group(LPAR + ident("new") + pyparsing.Optional(COLON + dotted("target")) + RPAR)
prohibit = pyparsing.Group(TILDE + (kind | (LPAR + kind + RPAR)))
flow = pyparsing.Group(kind + pyparsing.Optional(COLON + kind))
island = label("label") + (prohibit("prohibit") | flow("flow")) + pyparsing.StringEnd()
requirement_only = (prohibit("prohibit") | flow("flow")) + pyparsing.StringEnd()


def _node(token):
    if token == '*':
        return WILDCARD
    return QualifiedName.parse(token)


def _kind(tokens, line):
    items = list(tokens)
    nodes = [_node(t) for t in items[0::2]]
    steps = []
    for step in items[1::2]:
        ops = None
        if 'ops' in step:
            ops = frozenset(step['ops'])
            if not ops:
                raise IflSyntaxError("empty operation set []", line)
        steps.append((Arrow.MULTI if step.get('plus') else Arrow.SINGLE, ops))
    return Kind.chain(nodes, steps)


def _requirement(result, line):
    if 'prohibit' in result:
        return Prohibit(_kind(result['prohibit'][0], line))
    kinds = result['flow']
    if len(kinds) == 1:
        return Exists(_kind(kinds[0], line))
    return Constraint(_kind(kinds[0], line), _kind(kinds[1], line))


def _check_shape(text, line):
    stripped = text.strip()
    if not stripped.startswith('('):
        raise IflSyntaxError(f"label missing in IFL annotation '{stripped}'", line)
    if stripped.endswith('>') or '> :' in stripped or '>:' in stripped:
        raise IflSyntaxError(f"dangling arrow in IFL annotation '{stripped}'", line)


def parse_ifl(text, line=None):
    """
    Parse the interior of one ;IFL; annotation.

    Args:
        text: Annotation text without the ;IFL; markers
        line: Source line for error messages

    Returns:
        LabeledRequirement for '(l) R', Refinement for '(l2:l) R'
    """
    _check_shape(text, line)
    try:
        result = island.parse_string(text, parse_all=True)
    except pyparsing.ParseException as e:
        raise IflSyntaxError(f"malformed IFL annotation '{text.strip()}': {e.msg}", line)

    requirement = _requirement(result, line)
    head = result['label']
    if 'target' in head:
        return Refinement(head['new'], head['target'], requirement)
    return LabeledRequirement(head['new'], requirement)


def parse_requirement(text):
    """Parse a bare requirement such as 'DB +> net : DB > anon +> net'."""
    if text.strip().endswith('>'):
        raise IflSyntaxError(f"dangling arrow in '{text.strip()}'")
    try:
        result = requirement_only.parse_string(text, parse_all=True)
    except pyparsing.ParseException as e:
        raise IflSyntaxError(f"malformed requirement '{text.strip()}': {e.msg}")
    return _requirement(result, None)


def parse_kind(text):
    requirement = parse_requirement(text)
    if not isinstance(requirement, Exists):
        raise IflSyntaxError(f"'{text}' is not a plain kind")
    return requirement.kind
