import time

import pytest

from src.controllers.verification_controller import VerificationController
from src.utils.config import Config
from src.utils.synthetic import PATTERNS, generate_config


def test_generated_text_is_reproducible():
    assert generate_config(20, 3, 50, 8, seed=5) == generate_config(20, 3, 50, 8, seed=5)
    assert generate_config(20, 3, 50, 8, seed=5) != generate_config(20, 3, 50, 8, seed=6)


def test_requirements_cycle_through_the_patterns():
    text = generate_config(20, 3, 10, 8, seed=1)
    labels = [line.split(')')[0].split('(')[1] for line in text.splitlines()
              if line.startswith(';IFL;')]
    assert labels == [f"{prefix}{n}" for n in (1, 2) for prefix, _ in PATTERNS]


def test_small_synthetic_run(tmp_path):
    path = tmp_path / 'small.cil'
    path.write_text(generate_config(30, 4, 120, 8, seed=3), encoding='utf-8')
    controller = VerificationController(Config())
    verdicts = controller.run(str(path))
    assert len(verdicts) == 8
    assert len(controller.kts.states) == 30


@pytest.mark.slow
def test_scaling_run_finishes(tmp_path):
    path = tmp_path / 'synthetic.cil'
    path.write_text(generate_config(), encoding='utf-8')
    config = Config()
    config.set('verifier.determinization_limit', 4096)
    start = time.perf_counter()
    verdicts = VerificationController(config).run(str(path))
    assert time.perf_counter() - start < 120
    assert len(verdicts) == 16
