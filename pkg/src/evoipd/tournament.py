"""All-play-all tournaments, attitude metrics and the benchmark harness."""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field

from .bank import ATTITUDE_ORDER, Attitude, AttitudeBank
from .errors import ConfigError, StrategyEvaluationError
from .game import C, MatchConfig, play_match
from .rngutil import TAG_MATCH, TAG_SAMPLING, substream


class FixedPlayer:
    """A participant that always plays one strategy (DSL or classic)."""

    def __init__(self, strategy, attitude=None, name=None):
        self.strategy = strategy
        self.attitude = attitude if attitude is not None else _spec_attitude(strategy)
        self.name = name or strategy.name

    def resolve(self, seed, rep, match_index, player_id):
        return self.strategy.instantiate()


class AttitudePlayer:
    """A participant that re-samples uniformly from its bank every match."""

    def __init__(self, bank: AttitudeBank, name=None):
        self.bank = bank
        self.attitude = bank.attitude
        self.name = name or f"{bank.attitude.value}-agent"

    def resolve(self, seed, rep, match_index, player_id):
        rng = substream(TAG_SAMPLING, seed, rep, match_index, player_id)
        idx = rng.randrange(len(self.bank.strategies))
        return self.bank.strategies[idx].instantiate()


def _spec_attitude(strategy):
    att = getattr(strategy, "attitude", None)
    if isinstance(att, str):
        return Attitude(att)
    return att


@dataclass(frozen=True)
class TournamentConfig:
    players: tuple
    repetitions: int
    match: MatchConfig
    seed: int

    def __post_init__(self):
        if len(self.players) < 2:
            raise ConfigError("a tournament needs at least 2 players")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")


def schedule(players):
    """Every unordered pair exactly once, in canonical (id) order."""
    n = len(players)
    if n < 2:
        raise ConfigError("need at least 2 players to schedule")
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass
class _Cell:
    payoff: int = 0
    rounds: int = 0
    coops: int = 0
    actions: int = 0


@dataclass
class TournamentResult:
    config: TournamentConfig
    pairs: list
    # scores[rep][player] = total payoff; rounds_played likewise
    scores: list = field(default_factory=list)
    rounds_played: list = field(default_factory=list)
    cells: dict = field(default_factory=dict)  # (Attitude, Attitude) -> _Cell
    records: dict = field(default_factory=dict)  # (rep, match_index) -> MatchRecord

    def tournament_scores(self, rep):
        """Mean round payoff per player in one repetition."""
        return [
            s / r if r else 0.0
            for s, r in zip(self.scores[rep], self.rounds_played[rep])
        ]

    def score_distributions(self):
        """Per player: list of tournament scores across repetitions."""
        n = len(self.config.players)
        return {
            self.config.players[i].name: [
                self.tournament_scores(rep)[i]
                for rep in range(self.config.repetitions)
            ]
            for i in range(n)
        }

    def head_to_head(self):
        """Pooled normalized payoff per attitude pairing: sum payoff / sum rounds."""
        return {
            key: cell.payoff / cell.rounds
            for key, cell in self.cells.items()
            if cell.rounds
        }


def cooperation_matrix(result: TournamentResult):
    """Cell (X, Y): fraction of X-players' actions that cooperate in X-vs-Y
    matches. Pairings with no matches are absent."""
    return {
        key: cell.coops / cell.actions
        for key, cell in result.cells.items()
        if cell.actions
    }


def _play_one(config: TournamentConfig, rep: int, match_index: int, i: int, j: int):
    players = config.players
    inst_a = players[i].resolve(config.seed, rep, match_index, i)
    inst_b = players[j].resolve(config.seed, rep, match_index, j)
    rng = substream(TAG_MATCH, config.seed, rep, match_index)
    try:
        record = play_match(inst_a, inst_b, config.match, rng=rng)
    except StrategyEvaluationError as exc:
        raise StrategyEvaluationError(
            f"repetition {rep}, pair ({players[i].name}, {players[j].name}): {exc}"
        ) from exc
    coops_a = record.config.rounds - sum(record.actions_a)
    coops_b = record.config.rounds - sum(record.actions_b)
    return record, coops_a, coops_b


_WORKER_CTX = None


def _worker_play(task):
    rep, match_index, i, j = task
    config = _WORKER_CTX
    record, coops_a, coops_b = _play_one(config, rep, match_index, i, j)
    return (rep, match_index, record.score_a, record.score_b, coops_a, coops_b)


def run_tournament(
    config: TournamentConfig, workers: int = 1, keep_matches: bool = False
) -> TournamentResult:
    """Run the full schedule for every repetition.

    Deterministic given config.seed, independent of `workers`: every match
    draws from its own derived stream and results are reduced in canonical
    (repetition, pair) order.
    """
    pairs = schedule(config.players)
    n = len(config.players)
    result = TournamentResult(config=config, pairs=pairs)
    rounds = config.match.rounds

    def reduce_one(rep, match_index, score_a, score_b, coops_a, coops_b, record=None):
        i, j = pairs[match_index]
        result.scores[rep][i] += score_a
        result.scores[rep][j] += score_b
        result.rounds_played[rep][i] += rounds
        result.rounds_played[rep][j] += rounds
        att_i = config.players[i].attitude
        att_j = config.players[j].attitude
        if att_i is not None and att_j is not None:
            cell = result.cells.setdefault((att_i, att_j), _Cell())
            cell.payoff += score_a
            cell.rounds += rounds
            cell.coops += coops_a
            cell.actions += rounds
            cell = result.cells.setdefault((att_j, att_i), _Cell())
            cell.payoff += score_b
            cell.rounds += rounds
            cell.coops += coops_b
            cell.actions += rounds
        if record is not None:
            result.records[(rep, match_index)] = record

    for _ in range(config.repetitions):
        result.scores.append([0] * n)
        result.rounds_played.append([0] * n)

    tasks = [
        (rep, m, i, j)
        for rep in range(config.repetitions)
        for m, (i, j) in enumerate(pairs)
    ]

    if workers <= 1 or keep_matches:
        # keep_matches stays serial: full records are too heavy to ship
        # between processes for large runs.
        for rep, m, i, j in tasks:
            record, coops_a, coops_b = _play_one(config, rep, m, i, j)
            reduce_one(
                rep, m, record.score_a, record.score_b, coops_a, coops_b,
                record=record if keep_matches else None,
            )
        return result

    global _WORKER_CTX
    ctx = multiprocessing.get_context("fork")
    _WORKER_CTX = config
    try:
        with ctx.Pool(processes=workers) as pool:
            chunk = max(1, len(tasks) // (workers * 8))
            summaries = pool.map(_worker_play, tasks, chunksize=chunk)
    finally:
        _WORKER_CTX = None
    for rep, m, score_a, score_b, coops_a, coops_b in sorted(summaries):
        reduce_one(rep, m, score_a, score_b, coops_a, coops_b)
    return result


def beaufils_harness(
    banks: dict,
    roster,
    repetitions: int,
    match: MatchConfig,
    seed: int,
    workers: int = 1,
):
    """Three attitude-agents vs the classic roster, repeated independently.

    Returns {participant name: [tournament score per repetition]}; the
    tournament score is the player's mean round payoff in that repetition.
    """
    from .classics import classic

    if not roster:
        raise ConfigError("Beaufils roster must be non-empty")
    players = [AttitudePlayer(banks[att]) for att in ATTITUDE_ORDER]
    for entry in roster:
        players.append(
            FixedPlayer(entry if hasattr(entry, "instantiate") else classic(entry))
        )
    config = TournamentConfig(
        players=tuple(players), repetitions=repetitions, match=match, seed=seed
    )
    result = run_tournament(config, workers=workers)
    return result.score_distributions()
