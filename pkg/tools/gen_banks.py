#!/usr/bin/env python3
"""Regenerate the bundled reference banks under src/evoipd/banks/bundled.

The bank contents are hand-designed archetype families; this script only
keeps the file layout, headers and manifests consistent. Run from the repo
root: python3 tools/gen_banks.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from evoipd import dsl  # noqa: E402

OUT = ROOT / "src" / "evoipd" / "banks" / "bundled" / "default"


def S(name, attitude, nl, body):
    return (name, attitude, nl.strip(), body.strip())


COOPERATIVE = [
    S("gentle_mirror", "cooperative",
      "Start by cooperating and simply mirror whatever the opponent did last round.",
      """
first: C
rules:
  if opp_last(1) == D -> D
  default: C
"""),
    S("patient_mirror_2", "cooperative",
      "Cooperate unless the opponent has defected twice in a row; only then retaliate.",
      """
first: C
rules:
  if consec_opp_defects >= 2 -> D
  default: C
"""),
    S("patient_mirror_3", "cooperative",
      "Very patient reciprocator: retaliate only after three consecutive opponent defections.",
      """
first: C
rules:
  if consec_opp_defects >= 3 -> D
  default: C
"""),
    S("forgiving_mirror_10", "cooperative",
      "Mirror the opponent but forgive a defection one time in ten.",
      """
first: C
rules:
  if opp_last(1) == D -> random(0.1)
  default: C
"""),
    S("forgiving_mirror_20", "cooperative",
      "Mirror the opponent but forgive a defection one time in five.",
      """
first: C
rules:
  if opp_last(1) == D -> random(0.2)
  default: C
"""),
    S("forgiving_mirror_30", "cooperative",
      "Mirror the opponent but forgive roughly a third of defections to break feuds.",
      """
first: C
rules:
  if opp_last(1) == D -> random(0.3)
  default: C
"""),
    S("soft_majority", "cooperative",
      "Cooperate as long as the opponent has cooperated at least as often as they defected.",
      """
first: C
rules:
  if opp_defects > opp_coops -> D
  default: C
"""),
    S("window_majority_10", "cooperative",
      "Look at the last ten rounds; defect only if the opponent cooperated less than half the time.",
      """
first: C
rules:
  if coop_rate(opp, 10) < 0.5 -> D
  default: C
"""),
    S("window_majority_15", "cooperative",
      "Judge the opponent over their last fifteen moves and punish only persistent defection.",
      """
first: C
rules:
  if coop_rate(opp, 15) < 0.4 -> D
  default: C
"""),
    S("olive_branch_3", "cooperative",
      "Play tit-for-tat, but after three rounds of mutual defection offer cooperation to reset the relationship.",
      """
first: C
rules:
  if consec_mutual_defects >= 3 -> C
  if opp_last(1) == D -> D
  default: C
"""),
    S("olive_branch_5", "cooperative",
      "Tit-for-tat with an olive branch: after five mutual defections, cooperate unconditionally once.",
      """
first: C
rules:
  if consec_mutual_defects >= 5 -> C
  if opp_last(1) == D -> D
  default: C
"""),
    S("score_guard_10", "cooperative",
      "Cooperate by default, but if the opponent pulls more than ten points ahead, defend yourself until level.",
      """
first: C
rules:
  if my_score + 10 < opp_score -> D
  if opp_last(1) == D -> D
  default: C
"""),
    S("score_guard_25", "cooperative",
      "Stay cooperative unless badly exploited: defect once you trail by more than twenty-five points.",
      """
first: C
rules:
  if my_score + 25 < opp_score -> D
  if opp_last(1) == D -> D
  default: C
"""),
    S("forgiving_grudge", "cooperative",
      "Hold a grudge after repeated defections, but drop it entirely once the opponent has been friendly for five straight rounds.",
      """
registers:
  grudge = 0 in [0, 3]
first: C
rules:
  if grudge >= 3 -> D
  if opp_last(1) == D -> D
  default: C
after_round:
  grudge := grudge + 1 if opp_last(1) == D
  grudge := 0 if coop_rate(opp, 5) >= 1.0
"""),
    S("double_check", "cooperative",
      "Never punish a single slip: defect only when the last two opponent moves were both defections.",
      """
first: C
rules:
  if pattern(opp, "DD") -> D
  default: C
"""),
    S("alternation_guard", "cooperative",
      "Cooperate, but refuse to be farmed by alternators: punish a defect-cooperate-defect-cooperate pattern.",
      """
first: C
rules:
  if pattern(opp, "DCDC") -> D
  if consec_opp_defects >= 2 -> D
  default: C
"""),
    S("gradual_gentle_2", "cooperative",
      "Respond to a defection with a short two-round punishment, then return to cooperation.",
      """
registers:
  punish = 0 in [0, 3]
first: C
rules:
  if punish > 0 -> D
  default: C
after_round:
  punish := punish - 1 if punish > 0
  punish := 2 if opp_last(1) == D and punish == 0
"""),
    S("gradual_gentle_1", "cooperative",
      "Answer each defection with exactly one defection of my own, then forgive.",
      """
registers:
  punish = 0 in [0, 2]
first: C
rules:
  if punish > 0 -> D
  default: C
after_round:
  punish := punish - 1 if punish > 0
  punish := 1 if opp_last(1) == D and punish == 0
"""),
    S("hesitant_forgiver", "cooperative",
      "Retaliate against repeated defection, but after a single defection flip a coin before punishing.",
      """
first: C
rules:
  if opp_last(1) == D and opp_last(2) == D -> D
  if opp_last(1) == D -> random(0.5)
  default: C
"""),
    S("mutual_recovery", "cooperative",
      "Mirror defections, but when both of us defected last round, step forward and cooperate to recover trust.",
      """
first: C
rules:
  if my_last(1) == D and opp_last(1) == D -> C
  if opp_last(1) == D -> D
  default: C
"""),
    S("long_memory_guard", "cooperative",
      "Stay cooperative unless the opponent's overall defection rate climbs above one in four.",
      """
first: C
rules:
  if opp_defects * 4 > round and round > 8 -> D
  default: C
"""),
    S("early_trust", "cooperative",
      "Give unconditional cooperation for the first five rounds, then punish only back-to-back defections.",
      """
first: C
rules:
  if round < 5 -> C
  if consec_opp_defects >= 2 -> D
  default: C
"""),
    S("streak_rewarder", "cooperative",
      "Reward recent good behaviour: if the opponent cooperated in at least four of the last five rounds, always cooperate.",
      """
first: C
rules:
  if coop_rate(opp, 5) >= 0.8 -> C
  if opp_last(1) == D -> D
  default: C
"""),
    S("gentle_majority", "cooperative",
      "Tolerate a couple of extra defections before concluding the opponent is hostile.",
      """
first: C
rules:
  if opp_defects > opp_coops + 2 -> D
  default: C
"""),
    S("peace_keeper", "cooperative",
      "Punish defection streaks, but break mutual-defection spirals quickly by offering cooperation.",
      """
first: C
rules:
  if consec_mutual_defects >= 2 -> C
  if consec_opp_defects >= 2 -> D
  default: C
"""),
]

AGGRESSIVE = [
    S("relentless", "aggressive",
      "Defect every single round, no matter what the opponent does.",
      """
first: D
rules:
  default: D
"""),
    S("near_relentless", "aggressive",
      "Defect almost always, cooperating only one round in twenty to probe for exploitable opponents.",
      """
first: D
rules:
  default: random(0.05)
"""),
    S("probe_and_punish", "aggressive",
      "Defect constantly, but throw in a cooperation every tenth round to see whether the opponent can be lured back in.",
      """
first: D
rules:
  if round % 10 == 9 -> C
  default: D
"""),
    S("restrained_shark", "aggressive",
      "Exploit anyone who keeps cooperating; ease off only when the opponent fights back hard.",
      """
first: D
rules:
  if coop_rate(opp, 5) >= 0.8 -> D
  if consec_opp_defects >= 3 -> C
  default: D
"""),
    S("bully_backoff_2", "aggressive",
      "Bully by default, but back down as soon as the opponent retaliates twice in a row.",
      """
first: D
rules:
  if consec_opp_defects >= 2 -> C
  default: D
"""),
    S("bully_backoff_4", "aggressive",
      "Keep defecting until the opponent has punished me four rounds running, then concede a cooperation.",
      """
first: D
rules:
  if consec_opp_defects >= 4 -> C
  default: D
"""),
    S("dd_breaker_5", "aggressive",
      "Defect relentlessly, but if we have been stuck in mutual defection for five rounds, attempt one cooperation.",
      """
first: D
rules:
  if consec_mutual_defects >= 5 -> C
  default: D
"""),
    S("dd_breaker_8", "aggressive",
      "Defect by default; only after eight straight rounds of mutual defection try cooperating to escape the rut.",
      """
first: D
rules:
  if consec_mutual_defects >= 8 -> C
  default: D
"""),
    S("score_predator", "aggressive",
      "Press any advantage: defect while ahead on points and punish cooperation as weakness.",
      """
first: D
rules:
  if my_score > opp_score -> D
  if opp_last(1) == C -> D
  default: random(0.3)
"""),
    S("lead_chaser", "aggressive",
      "Defect whenever behind on points, probing with an occasional cooperation when the scores allow it.",
      """
first: D
rules:
  if my_score < opp_score -> D
  if round % 5 == 0 -> C
  default: D
"""),
    S("endgame_striker_50", "aggressive",
      "Play nice tit-for-tat for most of the match, then defect for the last fifty rounds when there is no future to punish me.",
      """
first: C
rules:
  if round >= total_rounds - 50 -> D
  if opp_last(1) == D -> D
  default: C
"""),
    S("endgame_striker_200", "aggressive",
      "Build trust early, then betray it: switch to permanent defection for the final two hundred rounds.",
      """
first: C
rules:
  if round >= total_rounds - 200 -> D
  if opp_last(1) == D -> D
  default: C
"""),
    S("suspicious_mirror", "aggressive",
      "Open with defection and thereafter copy the opponent's previous move.",
      """
first: D
rules:
  if opp_last(1) == D -> D
  default: C
"""),
    S("harsh_majority", "aggressive",
      "Defect against anyone who is mostly cooperative; only sustained retaliation earns a concession.",
      """
first: D
rules:
  if consec_opp_defects >= 3 -> C
  if opp_coops >= opp_defects -> D
  default: D
"""),
    S("alternating_pressure", "aggressive",
      "Defect two rounds out of every three in a fixed cycle, regardless of the opponent.",
      """
first: C
rules:
  if round % 3 == 0 -> C
  default: D
"""),
    S("pattern_shark", "aggressive",
      "Hunt habitual cooperators: whenever the opponent's last two moves were cooperation, strike with defection.",
      """
first: D
rules:
  if pattern(opp, "CC") -> D
  if opp_last(1) == D -> random(0.2)
  default: D
"""),
    S("opening_blitz", "aggressive",
      "Defect for the whole opening phase to establish dominance, then mostly defect while mirroring resistance.",
      """
first: D
rules:
  if round < 20 -> D
  if opp_last(1) == D -> D
  default: random(0.25)
"""),
    S("grinder", "aggressive",
      "Wear the opponent down with defection; cooperate only once they have defected five rounds in a row.",
      """
registers:
  pressure = 0 in [0, 10]
first: D
rules:
  if pressure >= 5 -> C
  default: D
after_round:
  pressure := pressure + 1 if opp_last(1) == D
  pressure := 0 if opp_last(1) == C
"""),
    S("random_heavy", "aggressive",
      "Act unpredictably but hostile: cooperate only twenty percent of the time.",
      """
first: D
rules:
  default: random(0.2)
"""),
    S("random_heavier", "aggressive",
      "Cooperate one round in ten at random; otherwise defect.",
      """
first: D
rules:
  default: random(0.1)
"""),
    S("bait_setter", "aggressive",
      "Defect by default, offering a cooperation only after the opponent shows a defect-cooperate-defect wobble worth exploiting.",
      """
first: D
rules:
  if pattern(opp, "DCD") -> C
  default: D
"""),
    S("sucker_puncher", "aggressive",
      "Mirror tough opponents, but once someone proves reliably cooperative, defect to cash in.",
      """
first: D
rules:
  if coop_rate(opp, 10) >= 0.9 and round > 10 -> D
  if opp_last(1) == C -> C
  default: D
"""),
    S("cold_start_mirror", "aggressive",
      "Open with ten rounds of defection to test the opponent, then settle into copying their moves.",
      """
first: D
rules:
  if round < 10 -> D
  if opp_last(1) == D -> D
  default: C
"""),
    S("defect_when_ahead", "aggressive",
      "Defect whenever at least level on points, and always answer defection with defection.",
      """
first: D
rules:
  if my_score >= opp_score -> D
  if opp_last(1) == D -> D
  default: C
"""),
    S("pressure_cycler", "aggressive",
      "Run a fixed pressure cycle: five rounds of defection followed by two conciliatory cooperations.",
      """
registers:
  phase = 0 in [0, 6]
first: D
rules:
  if phase <= 4 -> D
  default: C
after_round:
  phase := phase + 1
  phase := 0 if phase >= 7
"""),
]

NEUTRAL = [
    S("mirror", "neutral",
      "Classic reciprocity: cooperate first, then repeat the opponent's previous move.",
      """
first: C
rules:
  if opp_last(1) == D -> D
  default: C
"""),
    S("wary_mirror", "neutral",
      "Open cautiously with a defection, then mirror the opponent exactly.",
      """
first: D
rules:
  if opp_last(1) == D -> D
  default: C
"""),
    S("win_stay_lose_shift", "neutral",
      "Keep cooperating while we agree; switch my action whenever last round's moves differed.",
      """
first: C
rules:
  if my_last(1) == opp_last(1) -> C
  default: D
"""),
    S("noisy_pavlov", "neutral",
      "Win-stay lose-shift, but after a disagreement flip a coin instead of always defecting.",
      """
first: C
rules:
  if my_last(1) == opp_last(1) -> C
  if rand() < 0.5 -> C
  default: D
"""),
    S("fair_matcher_10", "neutral",
      "Match the opponent's recent cooperation rate: cooperate with the same probability they did over the last ten rounds.",
      """
first: C
rules:
  if rand() <= coop_rate(opp, 10) -> C
  default: D
"""),
    S("fair_matcher_20", "neutral",
      "Cooperate with probability equal to the opponent's cooperation rate over the last twenty rounds.",
      """
first: C
rules:
  if rand() <= coop_rate(opp, 20) -> C
  default: D
"""),
    S("measured_mirror", "neutral",
      "Punish two defections in a row for certain; a single defection gets punished half the time.",
      """
first: C
rules:
  if consec_opp_defects >= 2 -> D
  if opp_last(1) == D -> random(0.5)
  default: C
"""),
    S("soft_majority", "neutral",
      "Cooperate while the opponent's cooperations at least match their defections.",
      """
first: C
rules:
  if opp_defects > opp_coops -> D
  default: C
"""),
    S("hard_majority", "neutral",
      "Defect unless the opponent has cooperated strictly more often than defected.",
      """
first: C
rules:
  if opp_defects >= opp_coops and round > 0 -> D
  default: C
"""),
    S("gradual_counter", "neutral",
      "Escalating punishment: answer the opponent's n-th defection with n defections, then two cooperations.",
      """
registers:
  punishing = 0 in [0, 100000]
  appeasing = 0 in [0, 2]
  defects_seen = 0 in [0, 100000]
  started = 0 in [0, 1]
first: C
rules:
  if punishing > 0 -> D
  if appeasing > 0 -> C
  if opp_last(1) == D -> D
  default: C
after_round:
  started := 0
  started := 1 if punishing == 0 and appeasing == 0 and round >= 2 and my_last(1) == D and opp_last(2) == D
  appeasing := appeasing - 1 if started == 0 and punishing == 0 and appeasing > 0
  appeasing := 2 if started == 0 and punishing == 1
  punishing := punishing - 1 if started == 0 and punishing > 0
  punishing := defects_seen - 1 if started == 1
  appeasing := 2 if started == 1 and defects_seen == 1
  defects_seen := defects_seen + 1 if opp_last(1) == D
"""),
    S("balanced_scorekeeper", "neutral",
      "Cooperate while not behind on points; defect to catch up when trailing.",
      """
first: C
rules:
  if my_score < opp_score -> D
  default: C
"""),
    S("scorekeeper_margin", "neutral",
      "Mostly mirror the opponent, but defect whenever more than ten points behind.",
      """
first: C
rules:
  if my_score + 10 < opp_score -> D
  if opp_last(1) == D -> D
  default: C
"""),
    S("alternation_sync", "neutral",
      "If the opponent is alternating, stay cooperative to stabilise play; otherwise mirror.",
      """
first: C
rules:
  if pattern(opp, "CDCD") -> C
  if opp_last(1) == D -> D
  default: C
"""),
    S("pattern_follower", "neutral",
      "Follow the opponent's recent two-move trend, defaulting to reciprocity when the trend is mixed.",
      """
first: C
rules:
  if pattern(opp, "DD") -> D
  if pattern(opp, "CC") -> C
  if opp_last(1) == D -> D
  default: C
"""),
    S("tit_for_two_tats", "neutral",
      "Cooperate unless the opponent defected in each of the last two rounds.",
      """
first: C
rules:
  if consec_opp_defects >= 2 -> D
  default: C
"""),
    S("slow_forgiver", "neutral",
      "Each defection earns a two-round punishment that cooling-off rounds gradually clear.",
      """
registers:
  anger = 0 in [0, 2]
first: C
rules:
  if anger > 0 -> D
  default: C
after_round:
  anger := 2 if opp_last(1) == D
  anger := anger - 1 if opp_last(1) == C and anger > 0
"""),
    S("probe_mirror", "neutral",
      "Mirror the opponent, but test their reaction with a defection every twenty-five rounds.",
      """
first: C
rules:
  if round % 25 == 24 -> D
  if opp_last(1) == D -> D
  default: C
"""),
    S("coin_flipper", "neutral",
      "Choose cooperation or defection completely at random every round.",
      """
first: random(0.5)
rules:
  default: random(0.5)
"""),
    S("generous_random", "neutral",
      "Reward cooperation in kind; answer defection with a mostly-defect coin flip.",
      """
first: C
rules:
  if opp_last(1) == C -> C
  default: random(0.3)
"""),
    S("echo_two", "neutral",
      "Copy any clear two-round trend from the opponent; flip a coin when their play is mixed.",
      """
first: C
rules:
  if opp_last(1) == D and opp_last(2) == D -> D
  if opp_last(1) == C and opp_last(2) == C -> C
  default: random(0.5)
"""),
    S("window_balancer", "neutral",
      "Keep my recent cooperation rate in line with the opponent's: defect when I have been the nicer one lately.",
      """
first: C
rules:
  if coop_rate(my, 10) > coop_rate(opp, 10) -> D
  default: C
"""),
    S("cautious_start", "neutral",
      "Cooperate for three rounds, then mirror firmly against streaks and leniently against single slips.",
      """
first: C
rules:
  if round < 3 -> C
  if consec_opp_defects >= 2 -> D
  if opp_last(1) == D -> random(0.5)
  default: C
"""),
    S("majority_mirror", "neutral",
      "Cooperate with opponents who cooperated at least half the time over the last twenty rounds.",
      """
first: C
rules:
  if coop_rate(opp, 20) >= 0.5 -> C
  default: D
"""),
    S("streak_ender", "neutral",
      "Mirror defections, but end long mutual-defection streaks with a unilateral cooperation.",
      """
first: C
rules:
  if consec_mutual_defects >= 4 -> C
  if opp_last(1) == D -> D
  default: C
"""),
    S("ledger_mirror", "neutral",
      "Keep a running ledger of the opponent's defections minus cooperations and turn hostile while it is in the red.",
      """
registers:
  debt = 0 in [-50, 50]
first: C
rules:
  if debt > 2 -> D
  if opp_last(1) == D -> D
  default: C
after_round:
  debt := debt + 1 if opp_last(1) == D
  debt := debt - 1 if opp_last(1) == C
"""),
]


def emit(bank, attitude):
    out_dir = OUT / attitude
    out_dir.mkdir(parents=True, exist_ok=True)
    for stale in out_dir.glob("*.ipd"):
        stale.unlink()
    manifest = {}
    for idx, (name, att, nl, body) in enumerate(bank):
        assert att == attitude, name
        header = "\n".join(f"# {line}" if line else "#" for line in nl.splitlines())
        source = (
            f"{header}\n"
            f'strategy "{name}" attitude={attitude} {{\n'
            + "\n".join("  " + line for line in body.splitlines())
            + "\n}\n"
        )
        spec = dsl.parse(source)
        diags = [d for d in dsl.validate(spec) if d.severity == "error"]
        assert not diags, (name, diags)
        filename = f"{idx:02d}_{name}.ipd"
        (out_dir / filename).write_text(source, encoding="utf-8")
        manifest[filename] = {
            "model": "bundled",
            "prompt_style": "default",
            "generated": "2026-08-23",
            "natural_language": nl,
        }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    print(f"{attitude}: {len(bank)} strategies")


def main():
    assert len(COOPERATIVE) == len(AGGRESSIVE) == len(NEUTRAL) == 25
    emit(COOPERATIVE, "cooperative")
    emit(AGGRESSIVE, "aggressive")
    emit(NEUTRAL, "neutral")


if __name__ == "__main__":
    main()
