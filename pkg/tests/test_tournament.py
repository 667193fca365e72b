import pytest

from evoipd.bank import Attitude, AttitudeBank
from evoipd.classics import BEAUFILS_ROSTER, CLASSIC_DSL, classic
from evoipd.dsl import load_spec
from evoipd.errors import ConfigError
from evoipd.game import MatchConfig
from evoipd.tournament import (
    AttitudePlayer,
    FixedPlayer,
    TournamentConfig,
    beaufils_harness,
    cooperation_matrix,
    run_tournament,
    schedule,
)

from conftest import TFT_SRC


def _toy_players():
    return (
        FixedPlayer(classic("AllC"), attitude=Attitude.COOPERATIVE),
        FixedPlayer(classic("AllD"), attitude=Attitude.AGGRESSIVE),
        FixedPlayer(classic("TitForTat"), attitude=Attitude.NEUTRAL),
    )


def _toy_config(repetitions=1, noise=0.0, rounds=1000, seed=0):
    return TournamentConfig(
        players=_toy_players(),
        repetitions=repetitions,
        match=MatchConfig(rounds=rounds, noise_prob=noise, seed=seed),
        seed=seed,
    )


class TestSchedule:
    def test_pair_counts(self):
        assert len(schedule(range(2))) == 1
        assert len(schedule(range(12))) == 66
        assert len(schedule(range(75))) == 2775

    def test_no_self_play_and_no_duplicates(self):
        pairs = schedule(range(10))
        assert all(i != j for i, j in pairs)
        assert len(set(frozenset(p) for p in pairs)) == len(pairs)

    def test_canonical_order(self):
        assert schedule(range(4)) == [
            (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)
        ]

    def test_too_few_players(self):
        with pytest.raises(ConfigError):
            schedule([1])


class TestRunTournament:
    def test_toy_scores_hand_enumerated(self):
        result = run_tournament(_toy_config())
        # AllC: 3000 (vs TFT) + 0 (vs AllD) over 2000 rounds
        # AllD: 5000 (vs AllC) + 1004 (vs TFT) over 2000 rounds
        # TFT: 3000 (vs AllC) + 999 (vs AllD) over 2000 rounds
        assert result.tournament_scores(0) == [1.5, 3.002, 1.9995]

    def test_score_distributions_shape(self):
        result = run_tournament(_toy_config(repetitions=3))
        dists = result.score_distributions()
        assert set(dists) == {"AllC", "AllD", "TitForTat"}
        assert all(len(v) == 3 for v in dists.values())
        # no noise, fixed strategies: every repetition is identical
        assert dists["AllD"] == [3.002] * 3

    def test_head_to_head_cells(self):
        result = run_tournament(_toy_config())
        h2h = result.head_to_head()
        coop, agg, neu = (
            Attitude.COOPERATIVE, Attitude.AGGRESSIVE, Attitude.NEUTRAL
        )
        assert h2h[(coop, agg)] == 0.0
        assert h2h[(agg, coop)] == 5.0
        assert h2h[(coop, neu)] == 3.0
        assert h2h[(agg, neu)] == pytest.approx(1.004)
        assert h2h[(neu, agg)] == pytest.approx(0.999)
        # single player per attitude: no diagonal cells
        assert (coop, coop) not in h2h

    def test_cooperation_matrix(self):
        result = run_tournament(_toy_config())
        matrix = cooperation_matrix(result)
        coop, agg, neu = (
            Attitude.COOPERATIVE, Attitude.AGGRESSIVE, Attitude.NEUTRAL
        )
        assert matrix[(coop, agg)] == 1.0
        assert matrix[(agg, coop)] == 0.0
        assert matrix[(neu, agg)] == pytest.approx(0.001)

    def test_normalized_payoffs_within_bounds(self):
        result = run_tournament(_toy_config(noise=0.1))
        for value in result.head_to_head().values():
            assert 0.0 <= value <= 5.0

    def test_score_conservation(self):
        config = _toy_config(noise=0.1, rounds=200)
        result = run_tournament(config, keep_matches=True)
        total_from_players = sum(result.scores[0])
        total_from_matches = sum(
            r.score_a + r.score_b for r in result.records.values()
        )
        assert total_from_players == total_from_matches

    def test_aggregation_matches_kept_records(self):
        config = _toy_config(noise=0.1, rounds=200)
        result = run_tournament(config, keep_matches=True)
        pairs = result.pairs
        recomputed = [0, 0, 0]
        for (rep, match_index), record in result.records.items():
            i, j = pairs[match_index]
            recomputed[i] += record.score_a
            recomputed[j] += record.score_b
        assert recomputed == result.scores[0]

    def test_workers_do_not_change_results(self):
        config = _toy_config(noise=0.1, rounds=300, repetitions=2, seed=5)
        serial = run_tournament(config, workers=1)
        parallel = run_tournament(config, workers=4)
        assert serial.scores == parallel.scores
        assert serial.head_to_head() == parallel.head_to_head()
        assert cooperation_matrix(serial) == cooperation_matrix(parallel)

    def test_deterministic_across_runs(self):
        a = run_tournament(_toy_config(noise=0.1, seed=9, rounds=100))
        b = run_tournament(_toy_config(noise=0.1, seed=9, rounds=100))
        assert a.scores == b.scores

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            TournamentConfig(
                players=(_toy_players()[0],), repetitions=1,
                match=MatchConfig(), seed=0,
            )
        with pytest.raises(ConfigError):
            TournamentConfig(
                players=_toy_players(), repetitions=0,
                match=MatchConfig(), seed=0,
            )


class TestAttitudePlayer:
    def _bank(self):
        return AttitudeBank(
            Attitude.NEUTRAL,
            (load_spec(TFT_SRC), load_spec(CLASSIC_DSL["Pavlov"])),
        )

    def test_resolution_is_deterministic(self):
        player = AttitudePlayer(self._bank())
        a = player.resolve(seed=1, rep=0, match_index=3, player_id=2)
        b = player.resolve(seed=1, rep=0, match_index=3, player_id=2)
        assert a.compiled is b.compiled

    def test_resolution_varies_with_keys(self):
        player = AttitudePlayer(self._bank())
        picks = {
            player.resolve(1, rep, m, 0).compiled.name
            for rep in range(10)
            for m in range(10)
        }
        # both members get sampled across matches
        assert picks == {"tft", "Pavlov"}

    def test_default_name(self):
        assert AttitudePlayer(self._bank()).name == "neutral-agent"


class TestBeaufilsHarness:
    def _banks(self):
        return {
            Attitude.AGGRESSIVE: AttitudeBank(
                Attitude.AGGRESSIVE, (load_spec(CLASSIC_DSL["AllD"]),)
            ),
            Attitude.COOPERATIVE: AttitudeBank(
                Attitude.COOPERATIVE, (load_spec(CLASSIC_DSL["AllC"]),)
            ),
            Attitude.NEUTRAL: AttitudeBank(
                Attitude.NEUTRAL, (load_spec(TFT_SRC),)
            ),
        }

    def test_shape(self):
        dists = beaufils_harness(
            self._banks(), ["AllC", "TitForTat"], repetitions=3,
            match=MatchConfig(rounds=50), seed=0,
        )
        assert len(dists) == 5  # 3 agents + 2 classics
        assert all(len(scores) == 3 for scores in dists.values())
        assert "aggressive-agent" in dists and "TitForTat" in dists

    def test_default_roster_size(self):
        assert len(BEAUFILS_ROSTER) == 11

    def test_empty_roster_rejected(self):
        with pytest.raises(ConfigError):
            beaufils_harness(
                self._banks(), [], repetitions=1,
                match=MatchConfig(rounds=10), seed=0,
            )
