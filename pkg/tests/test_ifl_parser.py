import warnings

import pytest

from conftest import q
from src.ifl.kinds import (WILDCARD, Arrow, Constraint, Exists, Kind,
                           LabeledRequirement, Prohibit, Refinement, Segment,
                           named_nodes, substitute)
from src.ifl.parser import parse_ifl, parse_kind, parse_requirement
from src.utils.errors import IflSyntaxError


def test_prohibition():
    parsed = parse_ifl('(S2) ~ DB +> other')
    assert parsed == LabeledRequirement(
        'S2', Prohibit(Kind((Segment(q('DB'), Arrow.MULTI, None, q('other')),))))


def test_parenthesized_prohibition():
    assert parse_ifl('(S2) ~ (DB +> other)') == parse_ifl('(S2) ~ DB +> other')


def test_refinement_of_a_constraint():
    parsed = parse_ifl('(S1R:S1) DB+>net : DB[read]>anon+>net')
    assert isinstance(parsed, Refinement)
    assert (parsed.new_label, parsed.target) == ('S1R', 'S1')
    assert isinstance(parsed.requirement, Constraint)
    consequent = parsed.requirement.consequent
    assert consequent.nodes == (q('DB'), q('anon'), q('net'))
    assert consequent.steps == ((Arrow.SINGLE, frozenset({'read'})), (Arrow.MULTI, None))


def test_smallest_kind():
    parsed = parse_ifl('(F0) a > b')
    assert parsed.requirement == Exists(Kind((Segment(q('a'), Arrow.SINGLE, None, q('b')),)))


def test_wildcards_operations_and_anchors():
    kind = parse_kind('* +[read write]> .http.front [append]> *')
    assert kind.nodes == (WILDCARD, q('.http.front'), WILDCARD)
    assert kind.segments[0].ops == frozenset({'read', 'write'})
    assert kind.segments[1].ops == frozenset({'append'})
    assert str(kind) == '* +[read write]> .http.front [append]> *'


def test_refinement_target_with_path():
    parsed = parse_ifl('(L2:inner.L) a > b')
    assert parsed.target == 'inner.L'


def test_rendering_parses_back():
    for text in ['DB +> net : DB [read]> anon +> net', '~ DB +> other', '* > x +[write]> *']:
        requirement = parse_requirement(text)
        assert parse_requirement(str(requirement)) == requirement


@pytest.mark.parametrize('text', [
    'a > b',
    '(F) a >',
    '(F) a > b :',
    '(F) a b',
    '(F) ~',
    '(F) a > b > ',
])
def test_malformed_annotations(text):
    with pytest.raises(IflSyntaxError):
        parse_ifl(text)


def test_parse_kind_rejects_requirements():
    with pytest.raises(IflSyntaxError):
        parse_kind('~ a > b')


def test_substitute_binds_parameters_only():
    requirement = parse_requirement('inp +> out')
    bound = substitute(requirement, {'inp': q('.net'), 'out': q('.DB')})
    assert bound == parse_requirement('.net +> .DB')
    assert substitute(requirement, {}) == requirement
    assert substitute(parse_requirement('* +> x'), {'x': q('.a')}) == parse_requirement('* +> .a')
    assert substitute(parse_requirement('x.y > x'), {'x': q('.a')}) == parse_requirement('x.y > .a')


def test_named_nodes_skip_wildcards():
    requirement = parse_requirement('* +> http +> * : net > http')
    assert named_nodes(requirement) == [q('http'), q('net'), q('http')]


def test_kind_invariants():
    with pytest.raises(ValueError):
        Kind(())
    with pytest.raises(ValueError):
        Segment(q('a'), Arrow.SINGLE, frozenset(), q('b'))
    with pytest.raises(ValueError):
        Kind((Segment(q('a'), Arrow.SINGLE, None, q('b')),
              Segment(q('c'), Arrow.SINGLE, None, q('d'))))


def test_parsing_uses_no_deprecated_pyparsing_api():
    with warnings.catch_warnings():
        warnings.simplefilter('error', DeprecationWarning)
        parse_ifl('(F1) .net +> .http : .net > .anon +> .http')
        parse_requirement('~ .DB +> .other')
