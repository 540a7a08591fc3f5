import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from engine.simulation import Output
from models.pll import (NO_EXTRA, BackupVars, PLLProtocol, QuickVars, Status, Timer, TournVars,
                        enumerate_states, initial_state, params_from_m, state_count_breakdown)
from tests.factories import backup, fresh, quick, timer, tourn
from utils.validators import InvalidParameterError


class TestParams:

    @pytest.mark.parametrize('m, l_max, c_max, phi', [
        (10, 50, 410, 3),
        (8, 40, 328, 2),
        (64, 320, 2624, 4),
        (2, 10, 82, 1),
    ])
    def test_derived_constants(self, m, l_max, c_max, phi):
        p = params_from_m(m)
        assert (p.l_max, p.c_max, p.phi) == (l_max, c_max, phi)

    @pytest.mark.parametrize('m', [1, 0, -3])
    def test_rejects_small_m(self, m):
        with pytest.raises(InvalidParameterError):
            params_from_m(m)


class TestInitialState:

    def test_leader_without_group_variables(self):
        state = initial_state(params_from_m(5))
        assert state.common.leader
        assert state.status is Status.X
        assert (state.epoch, state.common.init, state.common.color) == (1, 1, 0)
        assert state.group is NO_EXTRA

    def test_fresh_states_equal(self, pll):
        assert pll.initial_state() == pll.initial_state()
        assert pll.output(pll.initial_state()) is Output.LEADER


class TestAssignStatus:

    def test_two_fresh_agents(self, pll):
        a, b = pll.assign_status(fresh(), fresh())
        assert a.status is Status.A and a.leader
        assert a.group == QuickVars(0, False)
        assert b.status is Status.B and not b.leader
        assert b.group == Timer(0)

    def test_late_agent_joins_as_follower(self, pll):
        a, b = pll.assign_status(fresh(), timer(17))
        assert a.status is Status.A and not a.leader
        assert a.group == QuickVars(0, True)
        assert b == timer(17)

    def test_late_agent_as_responder(self, pll):
        a, b = pll.assign_status(quick(3), fresh())
        assert a == quick(3)
        assert b.status is Status.A and not b.leader

    def test_assigned_agents_untouched(self, pll):
        pair = (quick(2), timer(5))
        assert pll.assign_status(*pair) == pair


class TestCountUp:

    def test_rollover_raises_tick_and_spreads_color(self, pll):
        c_max = pll.params.c_max
        t, a = pll.count_up(timer(c_max - 1), quick(0, color=0))
        assert t.group == Timer(0)
        assert (t.common.color, t.common.tick) == (1, True)
        assert (a.common.color, a.common.tick) == (1, True)

    def test_timer_counts(self, pll):
        t, _ = pll.count_up(timer(4), quick(0))
        assert t.group == Timer(5) and not t.common.tick

    def test_color_wraps_around(self, pll):
        a, b = pll.count_up(quick(0, color=2), quick(0, color=0))
        assert a.common.color == 0 and a.common.tick
        assert b.common.color == 0 and not b.common.tick

    def test_behind_timer_restarts(self, pll):
        t, a = pll.count_up(timer(30, color=0), quick(0, color=1))
        assert t.group == Timer(0)
        assert t.common.color == 1 and t.common.tick

    def test_same_color_no_change(self, pll):
        pair = (quick(1, color=1), quick(2, color=1))
        assert pll.count_up(*pair) == pair


class TestQuickElimination:

    def test_initiator_leader_gets_heads(self, pll):
        a, _ = pll.quick_elimination(quick(3), quick(0, True, leader=False))
        assert a.group == QuickVars(4, False)

    def test_responder_leader_gets_tails(self, pll):
        _, b = pll.quick_elimination(quick(0, True, leader=False), quick(3))
        assert b.group == QuickVars(3, True)

    def test_level_capped(self, pll):
        l_max = pll.params.l_max
        a, _ = pll.quick_elimination(quick(l_max), timer(0))
        assert a.group.level_q == l_max

    def test_lower_level_demoted(self, pll):
        a, b = pll.quick_elimination(quick(2, True), quick(5, True))
        assert not a.leader and a.group.level_q == 5
        assert b == quick(5, True)

    def test_not_done_agents_do_not_compare(self, pll):
        pair = (quick(2, False), quick(5, True))
        assert pll.quick_elimination(*pair) == pair


class TestTournament:

    @pytest.fixture
    def protocol(self):
        return PLLProtocol.from_m(10)

    def test_responder_appends_one(self, protocol):
        _, b = protocol.tournament(tourn(0, 0, leader=False), tourn(2, 1))
        assert b.group == TournVars(5, 2)

    def test_initiator_appends_zero(self, protocol):
        a, _ = protocol.tournament(tourn(2, 1), tourn(0, 0, leader=False))
        assert a.group == TournVars(4, 2)

    def test_lower_value_demoted(self, protocol):
        a, b = protocol.tournament(tourn(6, 3), tourn(3, 3))
        assert a == tourn(6, 3)
        assert not b.leader and b.group == TournVars(6, 3)

    def test_unfinished_agents_do_not_compare(self, protocol):
        pair = (tourn(6, 3), tourn(1, 2))
        assert protocol.tournament(*pair) == pair


class TestBackUp:

    def test_ticking_initiator_gets_heads(self, pll):
        a, b = pll.back_up(backup(7, tick=True), backup(0, leader=False))
        assert a.group == BackupVars(8)
        assert b.group == BackupVars(8) and not b.leader

    def test_no_tick_no_flip(self, pll):
        a, _ = pll.back_up(backup(7), timer(3, epoch=4))
        assert a.group == BackupVars(7)

    def test_equal_leaders_responder_demoted(self, pll):
        a, b = pll.back_up(backup(4), backup(4))
        assert a.leader and not b.leader

    def test_lower_leader_demoted_once(self, pll):
        a, b = pll.back_up(backup(4), backup(6))
        assert not a.leader and a.group == BackupVars(6)
        assert b.leader


class TestTransition:

    def test_two_fresh_agents(self):
        protocol = PLLProtocol.from_m(8)
        a, b = protocol.transition(fresh(), fresh())
        assert a.status is Status.A and a.leader
        assert a.group == QuickVars(1, False)
        assert (a.epoch, a.common.color) == (1, 0)
        assert b.status is Status.B and not b.leader
        assert b.group == Timer(1)

    def test_rollover_moves_both_to_next_epoch(self, pll):
        c_max = pll.params.c_max
        t, a = pll.transition(timer(c_max - 1), quick(2, True, leader=False))
        assert t.epoch == a.epoch == 2
        assert a.common.init == 2
        assert a.group == TournVars(0, 0)

    def test_epoch_one_meets_epoch_four(self, pll):
        a, t = pll.transition(quick(3, True), timer(10, epoch=4))
        assert a.epoch == t.epoch == 4
        assert a.group == BackupVars(0)
        assert t.group == Timer(11)

    def test_outputs(self, pll):
        assert pll.output(pll.initial_state()) is Output.LEADER
        assert pll.output(timer(0)) is Output.FOLLOWER
        assert pll.output(quick(0, leader=False)) is Output.FOLLOWER


class TestStateSpace:

    @staticmethod
    def expected_count(m):
        p = params_from_m(m)
        per_common = (1 + 10 * p.c_max + 2 * (p.l_max + 1)
                      + 5 * (2 ** p.phi) * (p.phi + 1) + 4 * (p.l_max + 1))
        return 12 * per_common

    @pytest.mark.parametrize('m', [2, 3, 5])
    def test_count_matches_group_layout(self, m):
        assert enumerate_states(params_from_m(m)) == self.expected_count(m)

    def test_breakdown_total(self):
        p = params_from_m(4)
        breakdown = state_count_breakdown(p)
        assert breakdown['total'] == enumerate_states(p)
        assert breakdown['timer'] == max(v for k, v in breakdown.items() if k != 'total')

    def test_enumeration_repeatable(self):
        p = params_from_m(3)
        assert enumerate_states(p) == enumerate_states(p)

    def test_grows_with_m(self):
        counts = [enumerate_states(params_from_m(m)) for m in range(2, 9)]
        assert counts == sorted(set(counts))

    def test_enumerated_states_are_consistent(self):
        protocol = PLLProtocol.from_m(3)
        assert all(state.is_consistent() for state in protocol.state_space())


_SMALL = PLLProtocol.from_m(2)
_SMALL_STATES = list(_SMALL.state_space())


@settings(max_examples=2000, deadline=None)
@given(st.sampled_from(_SMALL_STATES), st.sampled_from(_SMALL_STATES))
def test_transition_total_and_consistent(s0, s1):
    a, b = _SMALL.transition(s0, s1)
    assert a.is_consistent() and b.is_consistent()
    assert a.epoch == b.epoch
    assert a.epoch >= max(s0.epoch, s1.epoch)
