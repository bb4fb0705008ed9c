import sys

import numpy as np
import pytest

from rispeb.config import default_config


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the per-criterion acceptance lines after the test summary."""
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None) if module else None
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cfg():
    return default_config()


@pytest.fixture(scope="session")
def scene(cfg):
    return cfg.scene()


@pytest.fixture(scope="session")
def wave(cfg):
    return cfg.waveform()


@pytest.fixture()
def rng():
    return np.random.default_rng(20260819)
