import pytest

from . import util as tests_util


def pytest_addoption(parser):
    """Add custom options to pytest command line"""
    # when specified, run the full acceptance sweeps
    parser.addoption("--runslow", action="store_true")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full acceptance sweep, only run with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("runslow"):
        return
    skip_slow = pytest.mark.skip(reason="need --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    """Fresh seeded random generator for each test"""
    return tests_util.rng()


@pytest.fixture
def sign_problem():
    """Sign graph with forcing 1 on [0, 1), -1 on [1, 2] and u⁰ = 0.3"""
    return tests_util.sign_problem()
