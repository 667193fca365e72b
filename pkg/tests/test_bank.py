import json
import random

import pytest

from evoipd.bank import (
    ATTITUDE_ORDER,
    Attitude,
    AttitudeBank,
    audit_bank,
    bundled_banks_path,
    load_bank,
    load_banks,
    resolve_banks_root,
)
from evoipd.classics import (
    BEAUFILS_ROSTER,
    CLASSIC_DSL,
    CLASSIC_NAMES,
    classic,
)
from evoipd.dsl import load_spec
from evoipd.errors import (
    AttitudeMismatchError,
    BankValidationError,
    ConfigError,
    EmptyBankError,
    ParseError,
    UnknownStrategyError,
)
from evoipd.game import C, D, MatchConfig, play_match

from conftest import ALLC_SRC, TFT_SRC, replay_decisions


# ---------------------------------------------------------------------------
# Classics

class TestClassics:
    def test_registry_contents(self):
        assert len(CLASSIC_NAMES) == 12
        assert "TitForTat" in CLASSIC_NAMES
        assert "Random" in CLASSIC_NAMES

    def test_beaufils_roster_is_eleven(self):
        assert len(BEAUFILS_ROSTER) == 11
        assert "PeriodicCCD" not in BEAUFILS_ROSTER
        assert set(BEAUFILS_ROSTER) < set(CLASSIC_NAMES)

    def test_aliases(self):
        assert classic("Spiteful").name == "Grudger"
        assert classic("Random(0.5)").name == "Random"

    def test_unknown_name(self):
        with pytest.raises(UnknownStrategyError):
            classic("SneakyPete")

    def test_gradual_vs_alld_prefix(self):
        record = play_match(
            classic("Gradual").instantiate(),
            classic("AllD").instantiate(),
            MatchConfig(rounds=12, seed=0),
        )
        moves = "".join("CD"[a] for a in record.actions_a)
        # punish 1 then appease twice, punish 4 (defections kept arriving
        # during the appeasement), appease twice, punish again
        assert moves == "CDCCDDDDCCDD"

    def test_grudger_never_forgives(self):
        history_opp = [C, C, D] + [C] * 20
        decisions, _ = replay_decisions(
            classic("Grudger"), classic("Grudger"),
            [C] * 23, history_opp,
        )
        assert decisions[:3] == [C, C, C]
        assert set(decisions[3:]) == {D}

    def test_soft_majority_cooperates_on_tie(self):
        decisions, _ = replay_decisions(
            classic("SoftMajority"), classic("SoftMajority"),
            [C, C, C], [D, C, C],
        )
        # empty history counts as a tie; 1 defect vs 1 coop is a tie again
        assert decisions == [C, D, C]

    def test_pavlov_win_stay_lose_shift(self):
        decisions, _ = replay_decisions(
            classic("Pavlov"), classic("Pavlov"),
            [C, C, D, D], [C, D, C, D],
        )
        # CC -> stay C, CD -> shift D, DC -> shift D, DD -> stay C
        assert decisions == [C, C, D, D]

    def test_periodic_cycles(self):
        for name, expected in (
            ("PeriodicCD", "CDCDCD"),
            ("PeriodicCCD", "CCDCCD"),
            ("PeriodicDDC", "DDCDDC"),
        ):
            decisions, _ = replay_decisions(
                classic(name), classic(name), [C] * 6, [C] * 6
            )
            assert "".join("CD"[a] for a in decisions) == expected

    @pytest.mark.parametrize("name", CLASSIC_NAMES)
    def test_dsl_twin_equivalence(self, name):
        compiled = load_spec(CLASSIC_DSL[name])
        rng = random.Random(hash(name) & 0xFFFF)
        for trial in range(60):
            rounds = 120
            hist_a = [rng.randrange(2) for _ in range(rounds)]
            hist_b = [rng.randrange(2) for _ in range(rounds)]
            native, twin = replay_decisions(
                classic(name), compiled, hist_a, hist_b, seed=trial
            )
            assert native == twin, f"{name} diverged on trial {trial}"


# ---------------------------------------------------------------------------
# Bank loading

def _write_bank(tmp_path, attitude, sources, manifest=None):
    directory = tmp_path / attitude
    directory.mkdir(parents=True, exist_ok=True)
    for i, source in enumerate(sources):
        (directory / f"{i:02d}_s.ipd").write_text(source, encoding="utf-8")
    if manifest is not None:
        (directory / "manifest.json").write_text(
            json.dumps(manifest), encoding="utf-8"
        )
    return directory


class TestLoadBank:
    def test_load_valid_bank(self, tmp_path):
        directory = _write_bank(tmp_path, "cooperative", [ALLC_SRC])
        bank = load_bank(directory, Attitude.COOPERATIVE)
        assert len(bank) == 1
        assert bank.strategies[0].name == "allc"
        assert bank.deterministic

    def test_missing_directory(self, tmp_path):
        with pytest.raises(ConfigError):
            load_bank(tmp_path / "nope", Attitude.NEUTRAL)

    def test_empty_directory(self, tmp_path):
        directory = tmp_path / "neutral"
        directory.mkdir()
        with pytest.raises(EmptyBankError):
            load_bank(directory, Attitude.NEUTRAL)

    def test_attitude_mismatch(self, tmp_path):
        directory = _write_bank(tmp_path, "aggressive", [ALLC_SRC])
        with pytest.raises(AttitudeMismatchError):
            load_bank(directory, Attitude.AGGRESSIVE)

    def test_parse_error_names_the_file(self, tmp_path):
        directory = _write_bank(tmp_path, "neutral", ["strategy oops"])
        with pytest.raises(ParseError) as err:
            load_bank(directory, Attitude.NEUTRAL)
        assert "00_s.ipd" in str(err.value)

    def test_validation_error(self, tmp_path):
        bad = (
            'strategy "x" attitude=neutral { first: C rules: '
            "if grudge > 0 -> D default: C }"
        )
        directory = _write_bank(tmp_path, "neutral", [bad])
        with pytest.raises(BankValidationError):
            load_bank(directory, Attitude.NEUTRAL)

    def test_header_comment_becomes_provenance(self, tmp_path):
        source = "# always extend the olive branch\n# no matter what\n" + ALLC_SRC
        directory = _write_bank(tmp_path, "cooperative", [source])
        bank = load_bank(directory, Attitude.COOPERATIVE)
        assert bank.provenance[0]["natural_language"] == (
            "always extend the olive branch\nno matter what"
        )

    def test_manifest_merged_into_provenance(self, tmp_path):
        directory = _write_bank(
            tmp_path, "cooperative", [ALLC_SRC],
            manifest={"00_s.ipd": {"model": "m1", "prompt_style": "prose"}},
        )
        bank = load_bank(directory, Attitude.COOPERATIVE)
        assert bank.provenance[0]["model"] == "m1"
        assert bank.provenance[0]["file"] == "00_s.ipd"

    def test_load_banks_needs_all_three(self, tmp_path):
        _write_bank(tmp_path, "cooperative", [ALLC_SRC])
        with pytest.raises(ConfigError):
            load_banks(tmp_path)

    def test_empty_bank_object_rejected(self):
        with pytest.raises(EmptyBankError):
            AttitudeBank(Attitude.NEUTRAL, ())


class TestBundledBanks:
    def test_resolve(self, tmp_path):
        assert resolve_banks_root("bundled") == bundled_banks_path()
        assert resolve_banks_root(tmp_path) == tmp_path

    def test_bundled_banks_load(self):
        banks = load_banks(bundled_banks_path())
        for att in ATTITUDE_ORDER:
            assert len(banks[att]) == 25


# ---------------------------------------------------------------------------
# Audit

class TestAudit:
    def test_toy_audit_matrix(self):
        banks = {
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
        report = audit_bank(banks, MatchConfig(rounds=100), seed=0)
        agg, coop, neu = ATTITUDE_ORDER
        assert report.matrix[(agg, coop)] == 0.0
        assert report.matrix[(coop, agg)] == 1.0
        assert report.matrix[(coop, neu)] == 1.0
        assert report.matrix[(neu, coop)] == 1.0
        # TFT vs AllD: one cooperation then all defections
        assert report.matrix[(neu, agg)] == pytest.approx(0.01)
        # single-member banks produce no same-attitude pairings
        assert (agg, agg) not in report.matrix
        assert report.faithful
        assert report.bank_sizes[agg] == 1

    def test_unfaithful_when_labels_swapped(self):
        banks = {
            Attitude.AGGRESSIVE: AttitudeBank(
                Attitude.AGGRESSIVE, (load_spec(CLASSIC_DSL["AllC"]),)
            ),
            Attitude.COOPERATIVE: AttitudeBank(
                Attitude.COOPERATIVE, (load_spec(CLASSIC_DSL["AllD"]),)
            ),
            Attitude.NEUTRAL: AttitudeBank(
                Attitude.NEUTRAL, (load_spec(TFT_SRC),)
            ),
        }
        report = audit_bank(banks, MatchConfig(rounds=100), seed=0)
        assert not report.faithful

    def test_bundled_banks_are_faithful(self):
        banks = load_banks(bundled_banks_path())
        report = audit_bank(banks, MatchConfig(rounds=50), seed=0)
        assert report.faithful
