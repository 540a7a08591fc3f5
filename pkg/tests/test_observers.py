import pytest

from analysis.observers import InvariantObserver, InvariantViolation, LeaderWatch, TrajectoryRecorder
from engine.scheduler import InteractionEvent, RandomSource
from engine.simulation import Configuration, run, single_leader
from models import BaselineProtocol, PLLProtocol, SymmetricPLLProtocol
from models.baselines import FOLLOWER, LEADER
from models.pll_sym import Coin
from tests.factories import quick, sym, timer


def _settled(protocol):
    """Configuration où tous les statuts sont attribués: un leader, deux minuteurs"""
    states = [quick(0), timer(3), timer(4), quick(0, True, leader=False)]
    if isinstance(protocol, SymmetricPLLProtocol):
        states = [sym(s) for s in states]
    return Configuration(states, protocol)


class TestInvariantsHoldOnRuns:

    @pytest.mark.parametrize('protocol', [
        PLLProtocol.from_m(6),
        SymmetricPLLProtocol.from_m(6),
        BaselineProtocol(),
    ], ids=['pll', 'pll-sym', 'baseline'])
    def test_no_violation_until_single_leader(self, protocol):
        config = Configuration.initial(protocol, 64)
        checker = InvariantObserver(protocol, config)
        result = run(protocol, 64, RandomSource(8), stop=single_leader, max_steps=2_000_000,
                     observers=[checker], configuration=config)
        assert result.stopped
        assert checker.violations == []
        assert checker.steps_checked == result.steps
        assert checker.leaders == 1

    @pytest.mark.parametrize('protocol', [PLLProtocol.from_m(4), SymmetricPLLProtocol.from_m(4)],
                             ids=['pll', 'pll-sym'])
    def test_checked_through_every_epoch(self, protocol):
        config = Configuration.initial(protocol, 16)
        checker = InvariantObserver(protocol, config)
        rng = RandomSource(5)
        result = run(protocol, 16, rng, stop=checker.reached_last_epoch, observers=[checker],
                     configuration=config)
        assert result.stopped
        assert checker.highest_epoch == 4
        assert checker.epoch_counts[4] == 16
        run(protocol, 16, rng, max_steps=20 * 16, observers=[checker], configuration=config)
        assert checker.violations == []
        assert checker.steps_checked == config.step

    def test_epochs_counted_from_start(self, pll):
        checker = InvariantObserver(pll, _settled(pll))
        assert checker.highest_epoch == 1
        assert not checker.reached_last_epoch(None)

    def test_pll_continues_after_convergence(self):
        protocol = PLLProtocol.from_m(5)
        config = Configuration.initial(protocol, 32)
        checker = InvariantObserver(protocol, config)
        run(protocol, 32, RandomSource(21), max_steps=60_000, observers=[checker], configuration=config)
        assert checker.violations == []


class TestTamperedSteps:

    def test_leader_increase_raises(self, pll):
        config = _settled(pll)
        checker = InvariantObserver(pll, config)
        with pytest.raises(InvariantViolation, match='leaders augmente'):
            checker(1, InteractionEvent(0, 3, 0), quick(0), quick(0))

    def test_status_change_recorded_when_not_strict(self, pll):
        config = _settled(pll)
        checker = InvariantObserver(pll, config, strict=False)
        checker(1, InteractionEvent(1, 2, 0), quick(0, True, leader=False), timer(5))
        assert any('statut B devenu A' in v for v in checker.violations)

    def test_epochs_must_merge(self, pll):
        config = _settled(pll)
        checker = InvariantObserver(pll, config, strict=False)
        checker(1, InteractionEvent(1, 2, 0), timer(4), timer(5, epoch=2))
        assert any('époques différentes' in v for v in checker.violations)

    def test_epoch_cannot_decrease(self, pll):
        config = Configuration([quick(0), timer(3, epoch=2), timer(4, epoch=2)], pll)
        checker = InvariantObserver(pll, config, strict=False)
        checker(1, InteractionEvent(1, 2, 0), timer(4), timer(5))
        assert any('redescendue' in v for v in checker.violations)

    def test_baseline_leaders_must_merge(self, baseline):
        config = Configuration([LEADER, LEADER, FOLLOWER], baseline)
        checker = InvariantObserver(baseline, config)
        with pytest.raises(InvariantViolation, match='référence'):
            checker(1, InteractionEvent(0, 1, 0), LEADER, LEADER)

    def test_last_leader_cannot_vanish(self, baseline):
        config = Configuration([LEADER, FOLLOWER], baseline)
        checker = InvariantObserver(baseline, config, strict=False)
        checker(1, InteractionEvent(0, 1, 0), FOLLOWER, FOLLOWER)
        assert any('plus aucun leader' in v for v in checker.violations)

    def test_coin_imbalance(self, pll_sym):
        config = _settled(pll_sym)
        checker = InvariantObserver(pll_sym, config)
        with pytest.raises(InvariantViolation, match='F0/F1'):
            checker(1, InteractionEvent(1, 2, 0), sym(timer(4), Coin.F0), sym(timer(5), Coin.J))


class TestTrajectory:

    def test_sampled_every_interval(self, pll):
        config = Configuration.initial(pll, 16)
        recorder = TrajectoryRecorder(pll, config)
        assert recorder.interval == 4
        run(pll, 16, RandomSource(4), max_steps=100, observers=[recorder], configuration=config)
        recorder.mark()
        steps = [step for step, _ in recorder.trajectory]
        assert steps == list(range(0, 101, 4))
        assert recorder.trajectory[0] == (0, 16)
        assert recorder.epoch_entries[1] == 0

    def test_mark_adds_final_sample(self, pll):
        config = Configuration.initial(pll, 16)
        recorder = TrajectoryRecorder(pll, config, interval=7)
        run(pll, 16, RandomSource(4), max_steps=10, observers=[recorder], configuration=config)
        recorder.mark()
        assert recorder.trajectory[-1] == (10, config.leader_count)

    def test_leader_watch(self, baseline):
        config = Configuration.initial(baseline, 8)
        watch = LeaderWatch(config)
        run(baseline, 8, RandomSource(2), stop=single_leader, observers=[watch], configuration=config)
        assert (watch.lowest, watch.highest) == (1, 8)
