"""共享夹具；标记为 slow 的用例默认跳过，加 --runslow 运行"""

import numpy as np
import pytest

from src.forward.boundary import from_knot_values
from src.forward.scenario import Resolution

FAST_RESOLUTION = Resolution(outer_nodes=128, inner_nodes=64, grading=4)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow reproduction checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def resolution():
    return FAST_RESOLUTION


@pytest.fixture
def fast_config():
    return {
        "numerics": {"outer_nodes": 128, "inner_nodes": 64, "grading": 4, "refinement": 2},
        "factorization": {"cutoff": 1.0e-8},
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def knot_data():
    return from_knot_values([1.0, 0.0, 2.0, 0.0], 32, 5.0)
