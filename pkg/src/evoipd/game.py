"""Actions, payoffs, noise and single-match execution.

Everything here is deterministic given the match seed. Within a round the
draw order is fixed: player A noise, player B noise, then any
strategy-internal randomness for A, then for B.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ConfigError, StrategyEvaluationError
from .rngutil import TAG_MATCH, substream

C = 0
D = 1


class Action(enum.IntEnum):
    COOPERATE = 0
    DEFECT = 1

    @property
    def letter(self) -> str:
        return "C" if self is Action.COOPERATE else "D"


def actions_to_string(actions) -> str:
    return "".join("C" if a == C else "D" for a in actions)


@dataclass(frozen=True)
class PayoffMatrix:
    reward: int = 3
    temptation: int = 5
    sucker: int = 0
    punishment: int = 1

    def check(self, allow_any: bool = False) -> None:
        if allow_any:
            return
        if not (self.temptation > self.reward > self.punishment > self.sucker):
            raise ConfigError(
                "payoff matrix violates the dilemma ordering "
                "temptation > reward > punishment > sucker: "
                f"{self}"
            )
        if not (2 * self.reward > self.temptation + self.sucker):
            raise ConfigError(
                "payoff matrix allows alternation to beat mutual cooperation: "
                f"{self}"
            )

    def table(self):
        # Indexed [a * 2 + b] -> (points_a, points_b)
        return (
            (self.reward, self.reward),
            (self.sucker, self.temptation),
            (self.temptation, self.sucker),
            (self.punishment, self.punishment),
        )


def payoff(a: int, b: int, m: PayoffMatrix):
    """Row/column player points for one joint action."""
    return m.table()[int(a) * 2 + int(b)]


@dataclass(frozen=True)
class MatchConfig:
    rounds: int = 1000
    noise_prob: float = 0.0
    seed: int = 0
    payoffs: PayoffMatrix = field(default_factory=PayoffMatrix)
    allow_any_matrix: bool = False

    def __post_init__(self):
        if self.rounds < 1:
            raise ConfigError(f"rounds must be >= 1, got {self.rounds}")
        if not 0.0 <= self.noise_prob <= 1.0:
            raise ConfigError(f"noise_prob must be in [0,1], got {self.noise_prob}")
        self.payoffs.check(allow_any=self.allow_any_matrix)


@dataclass(frozen=True)
class MatchRecord:
    actions_a: tuple
    actions_b: tuple
    intended_a: tuple
    intended_b: tuple
    score_a: int
    score_b: int
    config: MatchConfig

    def to_json(self) -> dict:
        return {
            "actions_a": actions_to_string(self.actions_a),
            "actions_b": actions_to_string(self.actions_b),
            "intended_a": actions_to_string(self.intended_a),
            "intended_b": actions_to_string(self.intended_b),
            "score_a": self.score_a,
            "score_b": self.score_b,
            "config": {
                "rounds": self.config.rounds,
                "noise_prob": self.config.noise_prob,
                "seed": self.config.seed,
                "payoffs": {
                    "reward": self.config.payoffs.reward,
                    "temptation": self.config.payoffs.temptation,
                    "sucker": self.config.payoffs.sucker,
                    "punishment": self.config.payoffs.punishment,
                },
            },
        }


def apply_noise(intended: int, noise_prob: float, rng) -> int:
    """Flip the action with probability noise_prob. Consumes one draw."""
    if rng.random() < noise_prob:
        return 1 - intended
    return intended


class PlayerView:
    """One player's read-only view of the realized game state.

    Histories hold realized (post-noise) actions as 0/1 ints. The two views
    of a match share the underlying history lists.
    """

    __slots__ = (
        "round",
        "total_rounds",
        "my_hist",
        "opp_hist",
        "my_score",
        "opp_score",
        "my_coops",
        "opp_coops",
        "consec_opp_defects",
        "consec_mutual_defects",
    )

    def __init__(self, total_rounds, my_hist, opp_hist):
        self.round = 0
        self.total_rounds = total_rounds
        self.my_hist = my_hist
        self.opp_hist = opp_hist
        self.my_score = 0
        self.opp_score = 0
        self.my_coops = 0
        self.opp_coops = 0
        self.consec_opp_defects = 0
        self.consec_mutual_defects = 0

    def advance(self, my_act, opp_act, my_pay, opp_pay):
        # Histories are shared lists; the caller appends exactly once.
        self.round += 1
        self.my_score += my_pay
        self.opp_score += opp_pay
        if my_act == C:
            self.my_coops += 1
        if opp_act == C:
            self.opp_coops += 1
            self.consec_opp_defects = 0
        else:
            self.consec_opp_defects += 1
        if my_act == D and opp_act == D:
            self.consec_mutual_defects += 1
        else:
            self.consec_mutual_defects = 0


def play_match(strategy_a, strategy_b, config: MatchConfig, rng=None) -> MatchRecord:
    """Run one match between two freshly instantiated strategy instances.

    `strategy_a` / `strategy_b` must expose decide(view, rng) -> 0|1 and
    after_round(view). Both observe realized (post-noise) actions only.
    """
    if rng is None:
        rng = substream(TAG_MATCH, config.seed)
    rounds = config.rounds
    noise = config.noise_prob
    table = config.payoffs.table()

    hist_a: list = []
    hist_b: list = []
    view_a = PlayerView(rounds, hist_a, hist_b)
    view_b = PlayerView(rounds, hist_b, hist_a)

    intended_a = []
    intended_b = []
    rand = rng.random

    for _ in range(rounds):
        # Fixed draw order: A noise, B noise, A strategy, B strategy.
        ua = rand()
        ub = rand()
        try:
            ia = strategy_a.decide(view_a, rng)
            ib = strategy_b.decide(view_b, rng)
        except Exception as exc:  # noqa: BLE001 - wrapped with context
            if isinstance(exc, StrategyEvaluationError):
                raise
            raise StrategyEvaluationError(
                f"strategy decision failed at round {view_a.round}: {exc}"
            ) from exc
        intended_a.append(ia)
        intended_b.append(ib)
        ra = 1 - ia if ua < noise else ia
        rb = 1 - ib if ub < noise else ib
        pay_a, pay_b = table[ra * 2 + rb]
        hist_a.append(ra)
        hist_b.append(rb)
        view_a.advance(ra, rb, pay_a, pay_b)
        view_b.advance(rb, ra, pay_b, pay_a)
        strategy_a.after_round(view_a)
        strategy_b.after_round(view_b)

    return MatchRecord(
        actions_a=tuple(hist_a),
        actions_b=tuple(hist_b),
        intended_a=tuple(intended_a),
        intended_b=tuple(intended_b),
        score_a=view_a.my_score,
        score_b=view_b.my_score,
        config=config,
    )
