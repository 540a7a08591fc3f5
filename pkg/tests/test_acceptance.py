import pytest

from commands.settings import ExitCode
from scripts.run_acceptance import AcceptanceRunner

pytestmark = pytest.mark.slow


@pytest.fixture
def runner():
    return AcceptanceRunner(seed=20190101, quick=True)


def test_trial_scaling(runner):
    assert runner.trials(2000) == 200
    assert runner.trials(50) == 10


def test_cheap_criteria(runner):
    assert runner.run(['states', 'determinism', 'epidemic']) is ExitCode.OK
    assert set(runner.results) == {'states', 'determinism', 'epidemic'}


@pytest.mark.parametrize('results, expected', [
    ({'a': True, 'b': True}, ExitCode.OK),
    ({'a': True, 'b': None}, ExitCode.INCOMPLETE),
    ({'a': False, 'b': None}, ExitCode.CHECK_FAILED),
])
def test_inconclusive_is_not_a_pass(runner, results, expected):
    runner.results = results
    assert runner.exit_code() is expected


def test_closure(runner):
    assert runner.closure() is True


def test_invariants_reach_every_epoch(runner):
    assert runner.invariants()


def test_symmetric(runner):
    assert runner.symmetric()
