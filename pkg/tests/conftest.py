"""Shared fixtures for the test suite."""

import os
import sys

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from logic.network import Network  # noqa: E402
from utils.fixtures import complete_digraph, out_star, path_network  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale performance checks (run with -m slow)")


@pytest.fixture
def path_abc():
    """A->B->C, unit volumes."""
    return path_network((1.0, 1.0))


@pytest.fixture
def path_abc_v2():
    """A->B->C, volume 2 on both edges."""
    return path_network((2.0, 2.0))


@pytest.fixture
def star():
    """c -> {1, 2, 3}, volume 10."""
    return out_star(3, 10.0)


@pytest.fixture
def k3():
    return complete_digraph(3)


@pytest.fixture
def k4():
    return complete_digraph(4, volume=5.0)


@pytest.fixture
def detour():
    """1->2 and 2->3 with volume 1, direct 1->3 with volume 0.25."""
    return Network.from_volumes(2017, {('1', '2'): 1.0, ('2', '3'): 1.0, ('1', '3'): 0.25})
