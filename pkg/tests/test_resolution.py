from conftest import fixture_text, q
from src.cil.names import GLOBAL
from src.cil.parser import parse_config
from src.cil.resolution import eval_bar, eval_name, eval_or

TREE = """
(block tree
  (block nest
    (type egg)))
(block inhouse
  (type object))
"""

HOUSE = """
(block house
  (type man)
  (block inner
    (type door)))
"""


def test_anchored_names_are_fixed_points():
    rules = parse_config(TREE)
    assert eval_name(q('.A'), 'type', q('.a'), rules) == q('.a')
    assert eval_bar(q('.A'), 'macro', q('.a'), rules) == q('.a')


def test_eval_looks_below_the_namespace():
    rules = parse_config(TREE)
    assert eval_name(q('.tree'), 'type', q('nest.egg'), rules) == q('.tree.nest.egg')
    assert eval_name(q('.tree'), 'block', q('nest'), rules) == q('.tree.nest')
    assert eval_name(q('.inhouse'), 'type', q('man'), rules) is None


def test_eval_checks_the_entity_kind():
    rules = parse_config(TREE)
    assert eval_name(GLOBAL, 'type', q('tree'), rules) is None
    assert eval_name(GLOBAL, 'block', q('tree'), rules) == q('.tree')


def test_typeattributes_resolve_as_types():
    rules = parse_config('(block A (typeattribute g))')
    assert eval_name(q('.A'), 'type', q('g'), rules) == q('.A.g')
    assert eval_name(q('.A'), 'typeattribute', q('g'), rules) == q('.A.g')


def test_eval_bar_walks_enclosing_blocks():
    rules = parse_config(HOUSE)
    assert eval_bar(q('.house.inner'), 'type', q('man'), rules) == q('.house.man')
    assert eval_bar(q('.house.inner'), 'type', q('door'), rules) == q('.house.inner.door')
    assert eval_bar(GLOBAL, 'block', q('Z'), rules) is None


def test_eval_bar_stops_before_the_global_namespace():
    rules = parse_config(fixture_text('stranger.cil'))
    assert eval_bar(q('.inhouse'), 'type', q('stranger'), rules) is None
    assert eval_bar(GLOBAL, 'type', q('stranger'), rules) == q('.stranger')


def test_eval_or_falls_back_to_global():
    rules = parse_config(fixture_text('stranger.cil'))
    assert eval_or(q('.inhouse'), GLOBAL, 'type', q('stranger'), rules) == q('.stranger')
    assert eval_or(q('.inhouse'), GLOBAL, 'type', q('object'), rules) == q('.inhouse.object')


def test_eval_or_on_the_inheritance_example():
    rules = parse_config(fixture_text('two_column.cil'))
    assert eval_or(q('.A'), GLOBAL, 'macro', q('m'), rules) == q('.m')
    assert eval_or(q('.B'), GLOBAL, 'type', q('a'), rules) == q('.B.a')
    assert eval_or(q('.A'), GLOBAL, 'type', q('a'), rules) == q('.a')
    assert eval_or(q('.A'), GLOBAL, 'type', q('missing'), rules) is None
