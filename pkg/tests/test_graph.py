import pytest

from conftest import fixture_text, q
from src.cil.names import GLOBAL
from src.cil.parser import parse_config
from src.controllers.normalizer import normalize
from src.semantics.graph import (build_graph, collect_requirements,
                                 requirement_label, resolve_typeattributes)
from src.utils.errors import SemanticsError

READ = frozenset({'read'})


def graph_of(text, warnings=None):
    return build_graph(normalize(parse_config(text)), warnings)


def test_inheritance_example_graph():
    graph = graph_of(fixture_text('two_column.cil'))
    assert graph.nodes == {q('.a'), q('.A.b'), q('.B.a'), q('.B.b')}
    assert graph.arc_set() == {(q('.a'), READ, q('.A.b')), (q('.B.a'), READ, q('.B.b'))}


def test_webapp_graph(webapp):
    graph = webapp.graph
    assert graph.types == {q('.DB'), q('.http'), q('.home'), q('.net'), q('.anon')}
    assert graph.attributes == {q('.other')}
    assert graph.ta[q('.other')] == frozenset({q('.home')})
    arcs = graph.arc_set()
    assert (q('.anon'), READ, q('.DB')) in arcs
    assert (q('.http'), READ, q('.other')) in arcs
    assert (q('.http'), frozenset({'read', 'write'}), q('.net')) in arcs
    # closure over typeattribute members
    assert (q('.http'), READ, q('.home')) in arcs
    assert len(arcs) == 6


def test_permissions_remember_their_class():
    graph = graph_of('(type a)(type b)\n'
                     '(allow a b (file (read)))\n'
                     '(allow a b (dir (read search)))')
    ops = graph.arcs[q('.a')][q('.b')]['ops']
    assert ops == {'read': frozenset({'file', 'dir'}), 'search': frozenset({'dir'})}


def test_allow_self_gives_a_loop_per_member():
    graph = graph_of('(type a)(type b)(typeattribute g)\n'
                     '(typeattributeset g (a b))\n'
                     '(allow g self (file (read)))')
    arcs = graph.arc_set()
    assert (q('.a'), READ, q('.a')) in arcs
    assert (q('.b'), READ, q('.b')) in arcs
    assert (q('.a'), READ, q('.b')) not in arcs


def test_attribute_expressions():
    text = """
(type a)(type b)(type c)
(typeattribute ab)(typeattribute bc)(typeattribute both)(typeattribute odd)
(typeattribute everything)(typeattribute none)(typeattribute nested)
(typeattributeset ab (a b))
(typeattributeset bc (b c))
(typeattributeset both (and ab bc))
(typeattributeset odd (xor ab bc))
(typeattributeset everything (all))
(typeattributeset nested (not both))
"""
    ta, warnings = resolve_typeattributes(normalize(parse_config(text)))
    assert ta[q('.both')] == {q('.b')}
    assert ta[q('.odd')] == {q('.a'), q('.c')}
    assert ta[q('.everything')] == {q('.a'), q('.b'), q('.c')}
    assert ta[q('.none')] == frozenset()
    assert ta[q('.nested')] == {q('.a'), q('.c')}
    assert warnings == []


def test_repeated_typeattributesets_accumulate():
    ta, _ = resolve_typeattributes(normalize(parse_config(
        '(type a)(type b)(typeattribute g)\n(typeattributeset g a)\n(typeattributeset g b)')))
    assert ta[q('.g')] == {q('.a'), q('.b')}


def test_contradictory_attributes_are_pruned_with_a_warning():
    warnings = []
    graph = graph_of(fixture_text('cycle.cil'), warnings)
    assert graph.ta[q('.b')] == {q('.a')}
    assert graph.ta[q('.c')] == frozenset()
    assert graph.cyclic == {q('.b'), q('.c')}
    assert len(warnings) == 1
    assert '.b -> .c -> .b' in warnings[0]
    assert (q('.a'), READ, q('.a')) in graph.arc_set()


def test_pruning_is_deterministic():
    first = graph_of(fixture_text('cycle.cil'))
    for _ in range(5):
        again = graph_of(fixture_text('cycle.cil'))
        assert again.ta == first.ta
        assert again.arc_set() == first.arc_set()


def test_empty_configuration():
    graph = graph_of('')
    assert graph.nodes == set()
    assert graph.arc_set() == set()
    assert collect_requirements(normalize(parse_config(''))) == []


def test_requirement_set(webapp):
    assert [r.label for r in webapp.requirements] == ['S2', 'F1', 'F2', 'F1R', 'F2R', 'S1R']


def test_requirements_of_uncalled_macros_are_excluded():
    rules = normalize(parse_config('(type a)\n(macro m((type x)) ;IFL; (F) x > x ;IFL;)'))
    assert collect_requirements(rules) == []


def test_requirement_labels():
    assert requirement_label(q('.A.B'), 'L') == 'A.B.L'
    assert requirement_label(GLOBAL, 'S2') == 'S2'


def test_setting_a_type_is_an_error():
    with pytest.raises(SemanticsError, match='not a typeattribute'):
        graph_of('(type a)(type b)\n(typeattributeset a b)')
