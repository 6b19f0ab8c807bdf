import logging
import logging.handlers
from pathlib import Path

import pytest

from src.utils.config import Config
from src.utils.errors import ConfigError
from src.utils.logger import get_logger, setup_logger

SHIPPED = Path(__file__).parent.parent / 'config.yaml'


def test_defaults():
    config = Config()
    assert config.get('verifier.determinization_limit') == 16384
    assert config.get('flows.table') is None
    assert config.get('nusmv.rename') == {}
    assert config.get('verifier.nope', 'fallback') == 'fallback'
    assert config.get('verifier.witness_cap.deeper') is None


def test_defaults_are_not_shared():
    first, second = Config(), Config()
    first.set('nusmv.rename', {'sink': 'sink_t'})
    assert second.get('nusmv.rename') == {}


def test_file_values_merge_over_defaults(tmp_path):
    path = tmp_path / 'config.yaml'
    path.write_text('verifier:\n  witness_cap: 3\nnusmv:\n  rename: {sink: sink_t}\n')
    config = Config(str(path))
    assert config.get('verifier.witness_cap') == 3
    assert config.get('verifier.workers') == 1
    assert config.get('nusmv.rename') == {'sink': 'sink_t'}


def test_shipped_config():
    config = Config(str(SHIPPED))
    table = Path(config.get('flows.table'))
    assert table == SHIPPED.resolve().parent / 'data' / 'default.flows'
    assert table.is_file()
    assert config.get('oracle.max_types') == 12


def test_relative_paths_are_anchored_at_the_project_root(tmp_path, monkeypatch):
    path = tmp_path / 'config.yaml'
    path.write_text('flows:\n  table: tables/my.flows\nsystem:\n  log_file: logs/run.log\n')
    monkeypatch.chdir(tmp_path)
    config = Config(str(path))
    root = SHIPPED.resolve().parent
    assert config.get('flows.table') == str(root / 'tables' / 'my.flows')
    assert config.get('system.log_file') == str(root / 'logs' / 'run.log')


def test_absolute_paths_are_kept(tmp_path):
    table = tmp_path / 'abs.flows'
    path = tmp_path / 'config.yaml'
    path.write_text(f'flows:\n  table: {table}\n')
    assert Config(str(path)).get('flows.table') == str(table)


def test_missing_file_falls_back_to_defaults(tmp_path):
    config = Config(str(tmp_path / 'nope.yaml'))
    assert config.get('refinement.search_budget') == 20000


def test_empty_file(tmp_path):
    path = tmp_path / 'empty.yaml'
    path.write_text('')
    assert Config(str(path)).get('oracle.max_types') == 12


@pytest.mark.parametrize('text, message', [
    ('verifier: [unclosed', 'cannot load config file'),
    ('- a\n- b\n', 'must hold a mapping'),
])
def test_malformed_files(tmp_path, text, message):
    path = tmp_path / 'bad.yaml'
    path.write_text(text)
    with pytest.raises(ConfigError, match=message):
        Config(str(path))


def test_set_and_save(tmp_path):
    config = Config()
    config.set('oracle.max_types', 3)
    config.set('extra.nested.value', 'x')
    path = tmp_path / 'saved.yaml'
    config.save(str(path))
    reloaded = Config(str(path))
    assert reloaded.get('oracle.max_types') == 3
    assert reloaded.get('extra.nested.value') == 'x'


def test_logger_writes_to_a_rotating_file(tmp_path):
    log_file = tmp_path / 'logs' / 'ifcil.log'
    root = setup_logger(level=logging.DEBUG, log_file=str(log_file), console=False)
    try:
        get_logger('src.test').info('hello from the verifier')
        for handler in root.handlers:
            handler.flush()
        assert 'hello from the verifier' in log_file.read_text(encoding='utf-8')
        assert any(isinstance(h, logging.handlers.RotatingFileHandler) for h in root.handlers)
    finally:
        for handler in root.handlers[:]:
            handler.close()
            root.removeHandler(handler)


def test_setup_replaces_handlers():
    root = setup_logger(level=logging.WARNING)
    setup_logger(level=logging.WARNING)
    assert len(root.handlers) == 1
    assert root.level == logging.WARNING
