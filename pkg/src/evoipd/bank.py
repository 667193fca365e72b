"""Attitude-labelled strategy banks: loading, bundled data, auditing."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import dsl
from .errors import (
    AttitudeMismatchError,
    BankValidationError,
    ConfigError,
    EmptyBankError,
)


class Attitude(enum.Enum):
    AGGRESSIVE = "aggressive"
    COOPERATIVE = "cooperative"
    NEUTRAL = "neutral"

    @classmethod
    def from_str(cls, text: str) -> "Attitude":
        try:
            return cls(text.lower())
        except ValueError:
            raise ConfigError(f"unknown attitude {text!r}") from None


ATTITUDE_ORDER = (Attitude.AGGRESSIVE, Attitude.COOPERATIVE, Attitude.NEUTRAL)


@dataclass(frozen=True)
class AttitudeBank:
    attitude: Attitude
    strategies: tuple  # CompiledStrategy, ...
    provenance: tuple = field(default=())  # dict per strategy

    def __post_init__(self):
        if not self.strategies:
            raise EmptyBankError(f"bank for {self.attitude.value} is empty")

    def __len__(self):
        return len(self.strategies)

    @property
    def deterministic(self) -> bool:
        return all(s.deterministic for s in self.strategies)


def _read_header_comment(text: str) -> str:
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            lines.append(line[2:] if line.startswith("# ") else line[1:])
        elif line.strip():
            break
    return "\n".join(lines)


def load_bank(directory, attitude: Attitude) -> AttitudeBank:
    """Load every .ipd file in `directory` as one attitude bank.

    All files must parse, validate cleanly and carry the bank's attitude.
    Provenance comes from an optional manifest.json next to the files.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigError(f"bank directory not found: {directory}")
    files = sorted(directory.glob("*.ipd"))
    if not files:
        raise EmptyBankError(f"no .ipd files in {directory}")

    manifest = {}
    manifest_path = directory / "manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    strategies = []
    provenance = []
    for path in files:
        text = path.read_text(encoding="utf-8")
        try:
            spec = dsl.parse(text)
        except dsl.ParseError as exc:
            raise type(exc)(f"{path.name}: {exc}") from exc
        diags = dsl.validate(spec)
        errors = [d for d in diags if d.severity == "error"]
        if errors:
            raise BankValidationError(path.name, errors)
        if spec.attitude != attitude.value:
            raise AttitudeMismatchError(
                f"{path.name}: strategy {spec.name!r} is labelled "
                f"{spec.attitude!r} but was loaded as {attitude.value!r}"
            )
        strategies.append(dsl.compile_spec(spec))
        meta = dict(manifest.get(path.name, {}))
        meta.setdefault("file", path.name)
        meta.setdefault("natural_language", _read_header_comment(text))
        provenance.append(meta)
    return AttitudeBank(attitude, tuple(strategies), tuple(provenance))


def load_banks(root) -> dict:
    """Load the three attitude banks from <root>/<attitude>/ directories."""
    root = Path(root)
    banks = {}
    for attitude in ATTITUDE_ORDER:
        banks[attitude] = load_bank(root / attitude.value, attitude)
    return banks


def bundled_banks_path() -> Path:
    """Location of the bundled reference banks (bundled/default layout)."""
    return Path(resources.files("evoipd") / "banks" / "bundled" / "default")


def resolve_banks_root(arg) -> Path:
    if str(arg) == "bundled":
        return bundled_banks_path()
    return Path(arg)


@dataclass(frozen=True)
class AuditReport:
    """3x3 attitude-vs-attitude cooperation propensities plus fidelity flag."""

    matrix: dict  # (Attitude, Attitude) -> float, absent pairs omitted
    faithful: bool
    bank_sizes: dict

    def cell(self, row: Attitude, col: Attitude):
        return self.matrix.get((row, col))


def audit_bank(banks: dict, match_config, seed: int = 0, workers: int = 1) -> AuditReport:
    """All-play-all audit of the three banks' member strategies.

    The bank set is FAITHFUL iff the aggressive row's mean cooperation is
    below the cooperative row's mean across present pairings.
    """
    from .tournament import (  # local import: tournament depends on bank
        FixedPlayer,
        TournamentConfig,
        cooperation_matrix,
        run_tournament,
    )

    players = []
    for attitude in ATTITUDE_ORDER:
        bank = banks[attitude]
        for strat in bank.strategies:
            players.append(FixedPlayer(strat, attitude=attitude))
    config = TournamentConfig(
        players=tuple(players), repetitions=1, match=match_config, seed=seed
    )
    result = run_tournament(config, workers=workers)
    matrix = cooperation_matrix(result)

    def row_mean(att):
        cells = [v for (r, _c), v in matrix.items() if r is att]
        return sum(cells) / len(cells) if cells else None

    agg = row_mean(Attitude.AGGRESSIVE)
    coop = row_mean(Attitude.COOPERATIVE)
    faithful = agg is not None and coop is not None and agg < coop
    sizes = {att: len(banks[att]) for att in ATTITUDE_ORDER if att in banks}
    return AuditReport(matrix=matrix, faithful=faithful, bank_sizes=sizes)
