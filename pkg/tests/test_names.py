import pytest

from src.cil.names import GLOBAL, QualifiedName


def test_parse_anchored_and_relative():
    anchored = QualifiedName.parse('.tree.nest.egg')
    relative = QualifiedName.parse('nest.egg')

    assert anchored == QualifiedName(True, ('tree', 'nest', 'egg'))
    assert relative == QualifiedName(False, ('nest', 'egg'))
    assert str(anchored) == '.tree.nest.egg'
    assert str(relative) == 'nest.egg'


def test_join_extends_namespace():
    tree = QualifiedName.parse('.tree')
    assert tree.join(QualifiedName.parse('nest.egg')) == QualifiedName.parse('.tree.nest.egg')
    assert GLOBAL.join(QualifiedName.parse('a')) == QualifiedName.parse('.a')


def test_parent_and_containment():
    name = QualifiedName.parse('.house.inner')
    assert name.parent == QualifiedName.parse('.house')
    assert name.parent.parent == GLOBAL
    assert name.is_within(QualifiedName.parse('.house'))
    assert name.is_within(GLOBAL)
    assert not name.is_within(QualifiedName.parse('.inner'))
    assert name.relative_to(GLOBAL) == ('house', 'inner')


def test_global_display():
    assert GLOBAL.is_global
    assert GLOBAL.display() == '#'
    assert QualifiedName.parse('.A').display() == '.A'


@pytest.mark.parametrize('text', ['', '.', 'a..b', 'a-b', '.a.'])
def test_invalid_names_rejected(text):
    with pytest.raises(ValueError):
        QualifiedName.parse(text)


def test_global_has_no_parent():
    with pytest.raises(ValueError):
        GLOBAL.parent
