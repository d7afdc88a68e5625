"""
Pytest configuration for the rc_codes tests
"""

import numpy as np
import pytest

from rc_codes.config import WorkbenchConfig
from rc_codes.hex_codec import load_appendix
from rc_codes.ring_codes import GeneratorMatrix


def pytest_configure(config):
    """Register the test markers"""
    config.addinivalue_line("markers", "slow: marks tests as slow")
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "unit: marks tests as unit tests")


@pytest.fixture(scope="session")
def appendix():
    """The bundled K = 8 hex document"""
    return load_appendix()


@pytest.fixture
def workbench_config(tmp_path):
    """Configuration writing logs and results under tmp_path"""
    return WorkbenchConfig(
        log_dir=str(tmp_path / "logs"),
        output_dir=str(tmp_path / "results"),
        default_seed=7,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def repetition3():
    """[3,1,3] binary repetition code"""
    return GeneratorMatrix.binary([[1, 1, 1]])


@pytest.fixture
def hamming74():
    """[7,4,3] Hamming code"""
    return GeneratorMatrix.binary(
        [
            [1, 0, 0, 0, 1, 1, 0],
            [0, 1, 0, 0, 1, 0, 1],
            [0, 0, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ]
    )


@pytest.fixture
def simplex_k2():
    """Binary simplex code of dimension 2: every nonzero word has weight 2"""
    return GeneratorMatrix.binary([[1, 0, 1], [0, 1, 1]])
