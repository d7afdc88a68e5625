"""
Tests for the workbench configuration, the run pool and the application class
"""

import os
import time

import pytest

from rc_codes.config import DEFAULT_CONFIG, WorkbenchConfig
from rc_codes.main import CodeWorkbench
from rc_codes.run_pool import RunPool


@pytest.mark.unit
class TestWorkbenchConfig:
    def test_defaults(self):
        assert DEFAULT_CONFIG.workers == 1
        assert DEFAULT_CONFIG.enumeration_cap == 1 << 24
        assert DEFAULT_CONFIG.codebook_cap == 1 << 20

    def test_from_env(self, monkeypatch):
        """Environment variables override the defaults"""
        monkeypatch.setenv("RC_CODES_WORKERS", "4")
        monkeypatch.setenv("RC_CODES_SEED", "123")
        monkeypatch.setenv("RC_CODES_ENUM_CAP_LOG2", "10")
        config = WorkbenchConfig.from_env()
        assert config.workers == 4
        assert config.default_seed == 123
        assert config.enumeration_cap == 1024

    def test_to_dict(self):
        assert WorkbenchConfig().to_dict()["frame_block"] == 4096


@pytest.mark.unit
class TestRunPool:
    def test_results_keep_order(self):
        """Later items finishing first do not reorder results"""

        def job(i):
            time.sleep(0.01 * (5 - i))
            return i * i

        with RunPool(workers=4) as pool:
            assert pool.map(job, range(5)) == [0, 1, 4, 9, 16]

    def test_summary(self):
        pool = RunPool(workers=2, name="test")
        pool.map(lambda x: x, [1, 2, 3])
        summary = pool.summary()
        assert summary["completed_jobs"] == 3
        assert summary["active_jobs"] == 0
        pool.shutdown()

    def test_failure_is_raised(self):
        def job(x):
            if x == 2:
                raise ValueError("boom")
            return x

        with RunPool(workers=2) as pool:
            with pytest.raises(ValueError):
                pool.map(job, [1, 2, 3])
            assert pool.summary()["failed_jobs"] == 1

    def test_at_least_one_worker(self):
        assert RunPool(workers=0).workers == 1


@pytest.mark.unit
class TestCodeWorkbench:
    def test_log_file(self, workbench_config):
        """The workbench writes its log under log_dir"""
        app = CodeWorkbench(workbench_config)
        app.logger.info("hello")
        app.shutdown()
        assert os.path.exists(os.path.join(workbench_config.log_dir, "rc_codes.log"))

    def test_load_bundled_section(self, workbench_config):
        app = CodeWorkbench(workbench_config)
        G, fixed_rows, name = app.load_matrix(None, "qpsk-noncoherent")
        app.shutdown()
        assert (G.k1, fixed_rows, name) == (5, 1, "qpsk-noncoherent")

    def test_distance(self, workbench_config, hamming74):
        app = CodeWorkbench(workbench_config)
        assert app.distance(hamming74)["d_min"] == 3
        app.shutdown()
