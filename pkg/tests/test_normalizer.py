import pytest

from conftest import fixture_text, q
from src.cil.model import (Allow, BlockInherit, Call, IflRequirement,
                           LocatedRule, TypeDecl, semantic_rules)
from src.cil.names import GLOBAL
from src.cil.parser import parse_config
from src.controllers.normalizer import Normalizer, normalize, strip_ifl
from src.ifl.parser import parse_requirement
from src.semantics.graph import collect_requirements
from src.utils.errors import (CyclicInheritanceError, MacroCallError,
                              RefinementError, UnresolvedNameError)

READ = frozenset({'read'})


def allows(rules):
    return {(str(r.rule.src), str(r.rule.dst)) for r in semantic_rules(rules)
            if isinstance(r.rule, Allow)}


def requirements(rules):
    return {(r.namespace, r.rule.label): r.rule.requirement for r in semantic_rules(rules)
            if isinstance(r.rule, IflRequirement)}


def test_macro_argument_binds_to_the_copied_local_type():
    text = """
(type a)
(block A
  (call B.m1(a)))
(block B
  (macro m1((type x))
    (type a)
    (allow a x (file (read)))))
"""
    rules = normalize(parse_config(text))
    assert allows(rules) == {('.A.a', '.A.a')}
    assert LocatedRule(q('.A'), TypeDecl('a')) in rules


def test_macro_parameter_shadows_a_global_type_of_the_same_name():
    text = """
(type x)
(type a)
(macro m((type x))
  (allow x x (file (read))))
(call m(a))
"""
    assert allows(normalize(parse_config(text))) == {('.a', '.a')}


def test_inheritance_resolves_before_calls():
    rules = normalize(parse_config(fixture_text('two_column.cil')))
    assert allows(rules) == {('.a', '.A.b'), ('.B.a', '.B.b')}
    assert LocatedRule(q('.A'), Allow(q('.a'), q('.A.b'), 'file', READ)) in rules
    assert LocatedRule(q('.B'), Allow(q('.B.a'), q('.B.b'), 'file', READ)) in rules


def test_intermediate_form_of_the_inheritance_example():
    text = """
(type a)
(macro m((type x))
  (type b)
  (allow x b
    (file (read))))
(block A
  (type b)
  (call .m(a)))
(block B
  (type a)
  (type b)
  (call .m(a)))
"""
    assert allows(normalize(parse_config(text))) == {('.a', '.A.b'), ('.B.a', '.B.b')}


def test_type_copied_from_a_macro_shadows_the_global_one():
    text = """
(type a)
(macro m(type x)
  (type a)
  (allow x x (file (read))))
(block A
  (call m(a)))
"""
    assert allows(normalize(parse_config(text))) == {('.A.a', '.A.a')}


def test_stranger_resolves_to_the_global_type():
    rules = normalize(parse_config(fixture_text('stranger.cil')))
    assert allows(rules) == {('.stranger', '.inhouse.object')}
    perms = {r.rule.perms for r in rules if isinstance(r.rule, Allow)}
    assert perms == {frozenset({'open'}), frozenset({'read'}), frozenset({'write'})}


def test_webapp_normalizes_to_the_reference_listing(webapp_text):
    normalized = semantic_rules(normalize(parse_config(webapp_text)))
    assert normalized == parse_config(fixture_text('webapp_normalized.cil'))


def test_webapp_requirements_and_report_order(webapp_text):
    normalized = normalize(parse_config(webapp_text))
    found = requirements(normalized)
    assert found[(GLOBAL, 'F1R')] == parse_requirement('.net +> .http +> .DB')
    assert found[(GLOBAL, 'S1R')] == parse_requirement('.DB +> .net : .DB [read]> .anon +> .net')
    labels = [r.label for r in collect_requirements(normalized)]
    assert labels == ['S2', 'F1', 'F2', 'F1R', 'F2R', 'S1R']


def test_normal_form_is_a_fixed_point(webapp_text):
    once = normalize(parse_config(webapp_text))
    assert normalize(once) == once
    reference = parse_config(fixture_text('webapp_normalized.cil'))
    assert normalize(reference) == reference


def test_requirements_never_affect_rewriting(webapp_text):
    rules = parse_config(webapp_text)
    assert strip_ifl(normalize(rules)) == normalize(strip_ifl(rules))


def test_strip_ifl():
    assert len(strip_ifl(parse_config(''))) == 0
    plain = parse_config('(type a)\n(allow a a (file (read)))')
    assert strip_ifl(plain) == plain


def test_phases_leave_no_inheritance_or_calls(webapp_text):
    normalizer = Normalizer()
    rules = parse_config(fixture_text('two_column.cil'))
    rules = normalizer.phase1_resolve_inherit(rules)
    assert all(r.rule.block.anchored for r in rules if isinstance(r.rule, BlockInherit))
    rules = normalizer.phase2_expand_inherit(rules)
    assert not any(isinstance(r.rule, BlockInherit) for r in rules)
    rules = normalizer.phase3_resolve_call(rules)
    assert {r.rule.macro for r in rules if isinstance(r.rule, Call)} == {q('.m')}
    rules = normalizer.phase4_copy_decls(rules)
    assert LocatedRule(q('.B'), TypeDecl('b')) in rules
    rules = normalizer.phase5_resolve_calls(rules)
    assert not any(isinstance(r.rule, Call) for r in rules)

    state = normalizer.run(parse_config(webapp_text))
    assert state.phase == 6


def test_inherited_requirement_is_refined_under_a_new_label():
    text = """
(block A
  (type a)
  (type b)
  ;IFL; (L) a +> b ;IFL;)
(block B
  (type c)
  (blockinherit A
    ;IFL; (L2:L) * +> c +> * ;IFL;))
"""
    normalized = normalize(parse_config(text))
    found = requirements(normalized)
    assert found[(q('.A'), 'L')] == parse_requirement('.A.a +> .A.b')
    assert found[(q('.B'), 'L2')] == parse_requirement('.B.a +> .B.c +> .B.b')
    assert (q('.B'), 'L') not in found
    assert [r.label for r in collect_requirements(normalized)] == ['A.L', 'B.L2']


def test_label_collisions_across_call_sites_are_suffixed():
    text = """
(macro m((type x))
  ;IFL; (F) x +> b ;IFL;)
(type a)
(type b)
(type c)
(call m(a))
(call m(c))
"""
    warnings = []
    found = requirements(normalize(parse_config(text), warnings))
    assert found[(GLOBAL, 'F')] == parse_requirement('.a +> .b')
    assert found[(GLOBAL, 'F_2')] == parse_requirement('.c +> .b')
    assert any('(F_2)' in w for w in warnings)


def test_identical_copies_share_their_label():
    text = """
(macro m((type x))
  ;IFL; (F) x +> x ;IFL;)
(type a)
(call m(a))
(call m(a))
"""
    found = requirements(normalize(parse_config(text)))
    assert list(found) == [(GLOBAL, 'F')]


@pytest.mark.parametrize('text, error', [
    ('(block A (blockinherit Z))', UnresolvedNameError),
    ('(block A (block B (blockinherit A)))', CyclicInheritanceError),
    ('(block A (call nosuch (a)))', UnresolvedNameError),
    ('(block A (allow a b (file (read))))', UnresolvedNameError),
    ('(macro m((type x)) (allow x x (file (read))))\n(type a)\n(call m(a a))', MacroCallError),
    ('(macro m((type x)) (call m(x)))\n(type a)\n(call m(a))', MacroCallError),
    ('(macro m((type x)) ;IFL; (F) x > x ;IFL;)\n(type a)\n'
     '(call m(a) ;IFL; (G:H) a > a ;IFL;)', RefinementError),
    ('(macro m((type x)) ;IFL; (F) x [read]> x ;IFL;)\n(type a)\n'
     '(call m(a) ;IFL; (G:F) a [write]> a ;IFL;)', RefinementError),
    ('(block A (type a) ;IFL; (L) a > a ;IFL;)\n'
     '(block B (blockinherit A ;IFL; (X:nope) a > a ;IFL;))', RefinementError),
    (';IFL; (F) ghost > ghost ;IFL;', UnresolvedNameError),
])
def test_normalization_errors(text, error):
    with pytest.raises(error):
        normalize(parse_config(text))


def test_normalization_errors_exit_with_their_code():
    with pytest.raises(UnresolvedNameError) as excinfo:
        normalize(parse_config('(block A (blockinherit Z))'))
    assert excinfo.value.exit_code == 11
    assert "block 'Z'" in str(excinfo.value)
