import pytest

from engine.scheduler import RandomSource
from models import BaselineProtocol, PLLProtocol, SymmetricPLLProtocol


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='Exécute aussi les simulations longues')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='simulation longue: utiliser --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def pll():
    return PLLProtocol.from_m(8)


@pytest.fixture
def pll_sym():
    return SymmetricPLLProtocol.from_m(8)


@pytest.fixture
def baseline():
    return BaselineProtocol()


@pytest.fixture
def rng():
    return RandomSource(12345)
