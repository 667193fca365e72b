"""Evolutionary iterated prisoner's dilemma engine.

Round-robin tournaments and Moran processes over attitude-conditioned
strategy banks written in a small sandboxed rule DSL.
"""

__version__ = "0.1.0"

from .bank import Attitude, AttitudeBank, audit_bank, load_bank, load_banks
from .classics import BEAUFILS_ROSTER, CLASSIC_NAMES, classic
from .dsl import load_spec
from .game import Action, MatchConfig, PayoffMatrix, play_match
from .moran import MoranConfig, run_batch, run_process
from .tournament import (
    AttitudePlayer,
    FixedPlayer,
    TournamentConfig,
    beaufils_harness,
    cooperation_matrix,
    run_tournament,
)

__all__ = [
    "__version__",
    "Action",
    "Attitude",
    "AttitudeBank",
    "AttitudePlayer",
    "BEAUFILS_ROSTER",
    "CLASSIC_NAMES",
    "FixedPlayer",
    "MatchConfig",
    "MoranConfig",
    "PayoffMatrix",
    "TournamentConfig",
    "audit_bank",
    "beaufils_harness",
    "classic",
    "cooperation_matrix",
    "load_bank",
    "load_banks",
    "load_spec",
    "play_match",
    "run_batch",
    "run_process",
    "run_tournament",
]
