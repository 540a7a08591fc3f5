import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from analysis.symmetry import collect_reachable_states, symmetry_sweep
from engine.scheduler import RandomSource
from engine.simulation import Configuration, run, single_leader
from models import PLLProtocol, SymmetricPLLProtocol, build_protocol
from models.pll import QuickVars, Status
from models.pll_sym import Coin, SymState, coin_balance
from tests.factories import backup, fresh, quick, sym, timer
from utils.validators import InvalidPopulationError


def x_state():
    return sym(fresh(Status.X))


def y_state():
    return sym(fresh(Status.Y))


class TestStatusDance:

    def test_two_x_become_y(self, pll_sym):
        a, b = pll_sym.sym_assign_status(x_state(), x_state())
        assert a.status is b.status is Status.Y

    def test_two_y_become_x(self, pll_sym):
        a, b = pll_sym.sym_assign_status(y_state(), y_state())
        assert a.status is b.status is Status.X

    @pytest.mark.parametrize('x_first', [True, False])
    def test_x_meets_y(self, pll_sym, x_first):
        pair = (x_state(), y_state()) if x_first else (y_state(), x_state())
        a, b = pll_sym.sym_assign_status(*pair)
        candidate, follower = (a, b) if x_first else (b, a)
        assert candidate.status is Status.A and candidate.leader and candidate.coin is None
        assert follower.status is Status.B and not follower.leader
        assert follower.coin is Coin.J

    def test_late_agent_gets_coin(self, pll_sym):
        a, _ = pll_sym.sym_assign_status(y_state(), sym(timer(3), Coin.K))
        assert a.status is Status.A and not a.leader
        assert a.coin is Coin.J


class TestCoinMix:

    @pytest.mark.parametrize('before, after', [
        ((Coin.J, Coin.J), (Coin.K, Coin.K)),
        ((Coin.K, Coin.K), (Coin.J, Coin.J)),
        ((Coin.J, Coin.K), (Coin.F0, Coin.F1)),
        ((Coin.K, Coin.J), (Coin.F1, Coin.F0)),
        ((Coin.F0, Coin.F1), (Coin.F0, Coin.F1)),
        ((Coin.F1, Coin.J), (Coin.F1, Coin.J)),
    ])
    def test_rules(self, pll_sym, before, after):
        a, b = pll_sym.sym_coin_mix(sym(timer(1), before[0]), sym(timer(2), before[1]))
        assert (a.coin, b.coin) == after

    def test_leaders_do_not_mix(self, pll_sym):
        pair = (sym(quick(1)), sym(timer(2), Coin.J))
        assert pll_sym.sym_coin_mix(*pair) == pair


class TestCoinReading:

    @pytest.mark.parametrize('leader_first', [True, False])
    def test_f0_reads_heads(self, pll_sym, leader_first):
        leader, follower = sym(quick(3)), sym(timer(5), Coin.F0)
        pair = (leader, follower) if leader_first else (follower, leader)
        result = pll_sym.sym_transition(*pair)
        new_leader = result[0] if leader_first else result[1]
        assert new_leader.group == QuickVars(4, False)

    def test_f1_reads_tails(self, pll_sym):
        a, _ = pll_sym.sym_transition(sym(quick(3)), sym(timer(5), Coin.F1))
        assert a.group == QuickVars(3, True)

    @pytest.mark.parametrize('coin', [Coin.J, Coin.K])
    def test_unmixed_coin_skipped(self, pll_sym, coin):
        a, _ = pll_sym.sym_transition(sym(quick(3)), sym(timer(5), coin))
        assert a.group == QuickVars(3, False)

    def test_identical_leaders_stay_identical(self, pll_sym):
        state = sym(backup(4))
        a, b = pll_sym.sym_transition(state, state)
        assert a == b
        assert a.leader and b.leader

    def test_distinct_leaders_one_demoted(self, pll_sym):
        a, b = pll_sym.sym_transition(sym(backup(4, color=0)), sym(backup(4, color=1)))
        assert [a.leader, b.leader].count(True) == 1


class TestPopulation:

    def test_two_agents_rejected(self, pll_sym):
        with pytest.raises(InvalidPopulationError):
            Configuration.initial(pll_sym, 2)
        with pytest.raises(InvalidPopulationError):
            build_protocol('pll-sym', n=2)

    def test_converges_at_small_n(self):
        protocol = SymmetricPLLProtocol.from_m(6)
        for trial in range(5):
            result = run(protocol, 64, RandomSource.for_trial(3, trial), stop=single_leader,
                         max_steps=2_000_000)
            assert result.stopped
            assert coin_balance(result.configuration.states) == 0


def test_symmetry_over_state_space():
    protocol = SymmetricPLLProtocol.from_m(4)
    for state in protocol.state_space():
        a, b = protocol.transition(state, state)
        assert a == b


def test_state_space_consistency():
    protocol = SymmetricPLLProtocol.from_m(2)
    for state in protocol.state_space():
        assert protocol.check_state(state) == [] or state.common.status is Status.B and state.leader


@pytest.fixture(scope='module')
def reachable():
    """États atteints par plusieurs exécutions de pll-sym à m=10"""
    protocol = SymmetricPLLProtocol.from_m(10)
    return protocol, collect_reachable_states(protocol, 128, seed=77, runs=4, max_steps=400_000)


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(data=st.data())
def test_fuzzed_reachable_pairs(reachable, data):
    protocol, states = reachable
    p = data.draw(st.sampled_from(states))
    q = data.draw(st.sampled_from(states))
    a, b = protocol.transition(p, p)
    assert a == b
    forward = protocol.transition(p, q)
    backward = protocol.transition(q, p)
    assert forward == (backward[1], backward[0])
    for state in forward:
        assert isinstance(state, SymState)
        assert protocol.check_state(state) == []


def test_reachable_states_cover_every_epoch(reachable):
    _, states = reachable
    assert {state.epoch for state in states} == {1, 2, 3, 4}


@pytest.mark.slow
def test_sweep_over_reachable_pairs(reachable):
    protocol, states = reachable
    report = symmetry_sweep(protocol, states, pairs=100_000, seed=20190101)
    assert report.pairs == 100_000
    assert report.passed, report.examples


def test_sweep_flags_role_dependent_protocol():
    protocol = PLLProtocol.from_m(4)
    report = symmetry_sweep(protocol, [protocol.initial_state()], pairs=10, seed=1)
    assert report.mismatches == 10
    assert not report.passed
    assert len(report.examples) == 10
