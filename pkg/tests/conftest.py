"""Shared fixtures and helpers for the test suite."""

import random

import pytest

from evoipd.bank import Attitude, AttitudeBank
from evoipd.classics import CLASSIC_DSL
from evoipd.dsl import load_spec
from evoipd.game import PlayerView, payoff


ALLC_SRC = 'strategy "allc" attitude=cooperative { first: C rules: default: C }'

TFT_SRC = """
strategy "tft" attitude=neutral {
  first: C
  rules:
    if opp_last(1) == D -> D
    default: C
}
"""


def single_strategy_bank(attitude: Attitude, source: str) -> AttitudeBank:
    """A degenerate one-member bank, handy for exact oracles."""
    return AttitudeBank(attitude, (load_spec(source),))


def identical_banks(source: str) -> dict:
    """The same single strategy under all three attitude labels."""
    compiled = load_spec(source)
    return {att: AttitudeBank(att, (compiled,)) for att in Attitude}


@pytest.fixture
def allc_bank_set():
    return identical_banks(CLASSIC_DSL["AllC"])


def pytest_terminal_summary(terminalreporter):
    """Print one pass/fail line per acceptance criterion after the run."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, elapsed in RESULTS:
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(
            f"[ACCEPTANCE] {name}: {verdict} ({elapsed:.1f}s)"
        )


def replay_decisions(factory_a, factory_b, history_a, history_b, seed=0):
    """Feed two strategy instances the same realized history and collect the
    decisions each would make, consuming identical private rand streams."""
    rounds = len(history_a)
    hist_a, hist_b = [], []
    view = PlayerView(rounds, hist_a, hist_b)
    inst_a = factory_a.instantiate()
    inst_b = factory_b.instantiate()
    rng_a = random.Random(seed)
    rng_b = random.Random(seed)
    decisions_a, decisions_b = [], []
    from evoipd.game import PayoffMatrix

    m = PayoffMatrix()
    for r in range(rounds):
        decisions_a.append(inst_a.decide(view, rng_a))
        decisions_b.append(inst_b.decide(view, rng_b))
        ra, rb = history_a[r], history_b[r]
        pa, pb = payoff(ra, rb, m)
        hist_a.append(ra)
        hist_b.append(rb)
        view.advance(ra, rb, pa, pb)
        inst_a.after_round(view)
        inst_b.after_round(view)
    return decisions_a, decisions_b
