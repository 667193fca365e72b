"""Moran-process population dynamics over attitude-agent genomes."""

from __future__ import annotations

from dataclasses import dataclass

from .bank import ATTITUDE_ORDER, Attitude
from .errors import ConfigError, MaxIterationsError
from .game import MatchConfig, play_match
from .rngutil import TAG_MATCH, TAG_SAMPLING, TAG_STEP, substream

INITIAL_PRESETS = {
    "4:4:4": {Attitude.AGGRESSIVE: 4, Attitude.COOPERATIVE: 4, Attitude.NEUTRAL: 4},
    "1:1:1": {Attitude.AGGRESSIVE: 4, Attitude.COOPERATIVE: 4, Attitude.NEUTRAL: 4},
    "8:2:2": {Attitude.AGGRESSIVE: 8, Attitude.COOPERATIVE: 2, Attitude.NEUTRAL: 2},
    "4:1:1": {Attitude.AGGRESSIVE: 8, Attitude.COOPERATIVE: 2, Attitude.NEUTRAL: 2},
}


@dataclass(frozen=True)
class MoranConfig:
    banks: dict  # Attitude -> AttitudeBank
    initial_counts: dict  # Attitude -> int
    match: MatchConfig
    seed: int
    max_iterations: int = 100_000
    exclude_parent: bool = False
    memoize: bool | None = None  # None = auto (on for deterministic banks, no noise)

    def __post_init__(self):
        n = sum(self.initial_counts.values())
        if n < 2:
            raise ConfigError("population size must be >= 2")
        for att, count in self.initial_counts.items():
            if count < 0:
                raise ConfigError(f"negative initial count for {att}")
            if count > 0 and att not in self.banks:
                raise ConfigError(f"no bank supplied for {att}")

    @property
    def population_size(self) -> int:
        return sum(self.initial_counts.values())

    def memoization_active(self) -> bool:
        if self.memoize is not None:
            return self.memoize
        if self.match.noise_prob != 0.0:
            return False
        return all(
            self.banks[att].deterministic
            for att, count in self.initial_counts.items()
            if count > 0
        )


@dataclass(frozen=True)
class MoranOutcome:
    fixated: Attitude
    iterations: int
    trajectory: tuple  # per-iteration (aggressive, cooperative, neutral) counts
    run_index: int = 0


def initial_members(config: MoranConfig):
    members = []
    for att in ATTITUDE_ORDER:
        members.extend([att] * config.initial_counts.get(att, 0))
    return members


def _counts(members):
    return tuple(sum(1 for m in members if m is att) for att in ATTITUDE_ORDER)


def fitness_round(
    members, config: MoranConfig, run_index: int, iteration: int, memo=None
):
    """Round-robin fitness: player i's total payoff over its n-1 matches."""
    n = len(members)
    fitness = [0] * n
    match_index = 0
    for i in range(n):
        for j in range(i + 1, n):
            bank_i = config.banks[members[i]]
            bank_j = config.banks[members[j]]
            rng_i = substream(
                TAG_SAMPLING, config.seed, run_index, iteration, match_index, i
            )
            rng_j = substream(
                TAG_SAMPLING, config.seed, run_index, iteration, match_index, j
            )
            strat_i = bank_i.strategies[rng_i.randrange(len(bank_i.strategies))]
            strat_j = bank_j.strategies[rng_j.randrange(len(bank_j.strategies))]
            key = None
            if memo is not None and strat_i.deterministic and strat_j.deterministic:
                key = (id(strat_i), id(strat_j))
                hit = memo.get(key)
                if hit is not None:
                    fitness[i] += hit[0]
                    fitness[j] += hit[1]
                    match_index += 1
                    continue
            rng = substream(
                TAG_MATCH, config.seed, run_index, iteration, match_index
            )
            record = play_match(
                strat_i.instantiate(), strat_j.instantiate(), config.match, rng=rng
            )
            if key is not None:
                memo[key] = (record.score_a, record.score_b)
            fitness[i] += record.score_a
            fitness[j] += record.score_b
            match_index += 1
    return fitness


def moran_step(members, fitness, rng, exclude_parent=False):
    """Fitness-proportional birth, uniform death. Mutates `members`."""
    n = len(members)
    total = sum(fitness)
    if total <= 0:
        parent = rng.randrange(n)
    else:
        pick = rng.random() * total
        acc = 0
        parent = n - 1
        for idx, f in enumerate(fitness):
            acc += f
            if pick < acc:
                parent = idx
                break
    if exclude_parent:
        victim = rng.randrange(n - 1)
        if victim >= parent:
            victim += 1
    else:
        victim = rng.randrange(n)
    members[victim] = members[parent]
    return parent, victim


def run_process(config: MoranConfig, run_index: int = 0) -> MoranOutcome:
    """One Moran process to fixation. Deterministic given (seed, run_index)."""
    members = initial_members(config)
    n = len(members)
    step_rng = substream(TAG_STEP, config.seed, run_index)
    memo = {} if config.memoization_active() else None
    trajectory = [_counts(members)]
    iteration = 0
    while True:
        counts = trajectory[-1]
        for att, count in zip(ATTITUDE_ORDER, counts):
            if count == n:
                return MoranOutcome(
                    fixated=att,
                    iterations=iteration,
                    trajectory=tuple(trajectory),
                    run_index=run_index,
                )
        if iteration >= config.max_iterations:
            raise MaxIterationsError(iteration, counts)
        fitness = fitness_round(members, config, run_index, iteration, memo=memo)
        moran_step(members, fitness, step_rng, exclude_parent=config.exclude_parent)
        iteration += 1
        trajectory.append(_counts(members))


@dataclass(frozen=True)
class BatchResult:
    proportions: dict  # Attitude -> fraction of runs fixating there
    outcomes: tuple
    errors: tuple  # (run_index, exception) pairs
    runs: int


def run_batch(config: MoranConfig, runs: int) -> BatchResult:
    """Independent processes on derived per-run streams."""
    if runs < 1:
        raise ConfigError("runs must be >= 1")
    outcomes = []
    errors = []
    for run_index in range(runs):
        try:
            outcomes.append(run_process(config, run_index=run_index))
        except MaxIterationsError as exc:
            errors.append((run_index, exc))
    completed = len(outcomes)
    proportions = {
        att: (
            sum(1 for o in outcomes if o.fixated is att) / completed
            if completed
            else 0.0
        )
        for att in ATTITUDE_ORDER
    }
    return BatchResult(
        proportions=proportions,
        outcomes=tuple(outcomes),
        errors=tuple(errors),
        runs=runs,
    )


def parse_initial_ratio(text: str, population_size: int = 12) -> dict:
    """Parse 'a:c:n' counts; the presets 1:1:1 and 4:1:1 map onto n=12."""
    if text in INITIAL_PRESETS:
        return dict(INITIAL_PRESETS[text])
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"initial ratio must be A:C:N, got {text!r}")
    try:
        counts = [int(p) for p in parts]
    except ValueError:
        raise ConfigError(f"initial ratio must be integers, got {text!r}") from None
    return dict(zip(ATTITUDE_ORDER, counts))
