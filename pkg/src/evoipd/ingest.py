"""Strategy-bank generation through a chat-completions endpoint.

The pipeline elicits a natural-language strategy (three prompt styles),
asks the converter model to express it in the strategy language, then
admits it only if it parses, validates and carries the right attitude.
Everything runs offline against recorded fixtures for testing.
"""

from __future__ import annotations

import enum
import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import requests

from . import dsl
from .bank import Attitude
from .errors import (
    ConfigError,
    ExhaustedRetriesError,
    FixtureMissError,
    TransportError,
)
from .rngutil import substream

API_KEY_ENV = "EVOIPD_API_KEY"


class PromptStyle(enum.Enum):
    DEFAULT = "default"
    REFINE = "refine"
    PROSE = "prose"


class Verdict(enum.Enum):
    ADMITTED = "Admitted"
    PARSE_FAILED = "ParseFailed"
    VALIDATION_FAILED = "ValidationFailed"
    BEHAVIOR_MISMATCH = "BehaviorMismatch"
    INEXPRESSIBLE = "Inexpressible"
    REFUSED = "Refused"


@dataclass(frozen=True)
class GenerationJob:
    model: str
    style: PromptStyle
    attitude: Attitude
    count: int = 25
    max_retries: int = 2
    seed: int = 0
    converter_model: str | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError("count must be >= 1")


@dataclass
class GenerationRecord:
    natural_language: str
    dsl_source: str | None
    verdict: Verdict
    transcript: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# Prompt templates

GAME_BRIEF = (
    "Two parties repeatedly choose, simultaneously and without "
    "communication, whether to cooperate or defect. Mutual cooperation "
    "pays 3 points each; mutual defection pays 1 point each; a lone "
    "defector takes 5 points while the cooperator receives 0. The "
    "interaction lasts 1000 rounds and both sides can see the full history "
    "of realized choices."
)

ATTITUDE_BRIEF = {
    Attitude.AGGRESSIVE: "aggressive: prioritise outscoring and exploiting the opponent",
    Attitude.COOPERATIVE: "cooperative: prioritise establishing and sustaining mutual cooperation",
    Attitude.NEUTRAL: "neutral: balanced play with no particular social bias",
}

# Scenario descriptions for the prose style. Deliberately free of the words
# cooperate / defect / payoff / game; a lint test enforces this.
SCENARIOS = (
    "Two nations hold recurring talks on trade protocols. Each meeting, "
    "every delegation privately decides whether to honour the shared tariff "
    "framework or quietly impose exceptions favouring its own industries. "
    "Honest adherence by both sides grows both economies; unilateral "
    "exceptions give a short-term edge at the partner's expense; mutual "
    "exceptions stall all progress. Draft a negotiation doctrine for your "
    "delegation to follow across many meetings.",
    "Two engineering firms co-develop a product line under a long-running "
    "contract. Each quarter, each firm decides whether to share its test "
    "data fully or hold the most valuable results back for its own patents. "
    "Full mutual sharing speeds the joint roadmap; one-sided withholding "
    "lets that firm file first; mutual withholding stalls the project. Set "
    "out a quarterly policy for your firm over the life of the contract.",
    "Two logistics companies share a freight corridor. Every scheduling "
    "window, each decides whether to follow the agreed slot rotation or "
    "grab extra slots for its own fleet. Respecting the rotation keeps the "
    "corridor fluid for both; grabbing slots wins immediate capacity while "
    "congesting the partner; mutual grabbing jams the corridor. Write a "
    "standing dispatch policy for the seasons ahead.",
    "Two broadcasters share a regional frequency band. Each month, each "
    "one chooses whether to keep its transmissions inside the agreed "
    "spectrum mask or boost power beyond it. Mutual discipline keeps both "
    "signals clean; a lone boost widens that station's reach while "
    "degrading the other's; mutual boosting ruins reception for everyone. "
    "Define a transmission policy for the coming years.",
)

SCENARIO_BANNED_WORDS = ("cooperate", "defect", "payoff", "game")

DSL_GUIDE = """You must express the strategy in the following small rule language.

Layout (all parts in this order; registers and after_round are optional):

  strategy "<name>" attitude=<aggressive|cooperative|neutral> {
    registers:
      <name> = <initial> in [<lo>, <hi>]
    first: C | D | random(p)          # random(p) cooperates with probability p
    rules:
      if <condition> -> C | D | random(p)
      default: C | D | random(p)
    after_round:
      <register> := <expression> if <condition>
  }

Rules are checked top to bottom each round; the first true condition fires,
else the default applies. Conditions may use: round, total_rounds,
my_last(k), opp_last(k), my_coops, opp_coops, my_defects, opp_defects,
my_score, opp_score, coop_rate(my|opp, window), consec_opp_defects,
consec_mutual_defects, pattern(my|opp, "CD..."), rand(), register names,
integer arithmetic (+ - * %), comparisons and and/or/not. Look-back windows
and patterns are limited to 20. Registers are clamped integers.

Reply with only the strategy block, inside a ```ipd code fence.
If the strategy genuinely cannot be expressed in this language, reply with
the single word INEXPRESSIBLE."""


def default_prompt(attitude: Attitude) -> list:
    return [
        {
            "role": "user",
            "content": (
                f"{GAME_BRIEF}\n\nWrite, in plain natural language, a "
                "complete strategy for one participant. The strategy must "
                f"be {ATTITUDE_BRIEF[attitude]}. Describe exactly when it "
                "cooperates and when it defects, including the first move."
            ),
        }
    ]


def prose_prompts(attitude: Attitude, scenario: str):
    phase1 = [
        {
            "role": "user",
            "content": (
                f"{scenario}\n\nWrite a high-level standing policy for your "
                f"side. The policy should be {ATTITUDE_BRIEF[attitude]}."
            ),
        }
    ]

    def phase2(policy_text):
        return [
            {
                "role": "user",
                "content": (
                    f"{GAME_BRIEF}\n\nThe following high-level policy was "
                    "written for an equivalent situation:\n\n"
                    f"{policy_text}\n\nRestate it as a concrete strategy "
                    "for this interaction, in plain natural language, "
                    "saying exactly when to cooperate and when to defect."
                ),
            }
        ]

    return phase1, phase2


def critique_prompt(strategy_text: str) -> list:
    return [
        {
            "role": "user",
            "content": (
                f"{GAME_BRIEF}\n\nHere is a proposed strategy:\n\n"
                f"{strategy_text}\n\nProvide a concise list of critiques "
                "of this strategy."
            ),
        }
    ]


def rewrite_prompt(strategy_text: str, critique: str) -> list:
    return [
        {
            "role": "user",
            "content": (
                f"{GAME_BRIEF}\n\nOriginal strategy:\n\n{strategy_text}\n\n"
                f"Critique:\n\n{critique}\n\nRewrite the strategy taking "
                "the critique into account. Reply with the full rewritten "
                "strategy in plain natural language."
            ),
        }
    ]


def conversion_prompt(natural_language: str, attitude: Attitude, diagnostics=None):
    content = (
        f"{GAME_BRIEF}\n\nConvert the following natural-language strategy "
        f"into the rule language below, labelled attitude={attitude.value}."
        f"\n\nStrategy:\n{natural_language}\n\n{DSL_GUIDE}"
    )
    if diagnostics:
        content += (
            "\n\nA previous attempt failed with these diagnostics; fix them:\n"
            + "\n".join(str(d) for d in diagnostics)
        )
    return [{"role": "user", "content": content}]


# ---------------------------------------------------------------------------
# Transports

def prompt_key(messages) -> str:
    canon = json.dumps(messages, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


class HttpTransport:
    """Minimal chat-completions client with retry and backoff."""

    def __init__(self, endpoint, model, api_key=None, attempts=3, backoff=1.0,
                 timeout=60.0, session=None):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.attempts = attempts
        self.backoff = backoff
        self.timeout = timeout
        self.session = session or requests.Session()

    def complete(self, messages) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {"model": self.model, "messages": messages}
        last_error = None
        for attempt in range(self.attempts):
            try:
                resp = self.session.post(
                    self.endpoint, json=body, headers=headers, timeout=self.timeout
                )
                if resp.status_code >= 500:
                    raise TransportError(f"server error {resp.status_code}")
                if resp.status_code >= 400:
                    raise TransportError(
                        f"request rejected ({resp.status_code}): {resp.text[:200]}"
                    )
                data = resp.json()
                return data["choices"][0]["message"]["content"]
            except (requests.RequestException, KeyError, ValueError) as exc:
                last_error = TransportError(str(exc))
            except TransportError as exc:
                if "rejected" in str(exc):
                    raise
                last_error = exc
            if attempt + 1 < self.attempts:
                time.sleep(self.backoff * (2 ** attempt))
        raise last_error


class FixtureTransport:
    """Replays recorded responses keyed by prompt hash. Fully offline."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def complete(self, messages) -> str:
        key = prompt_key(messages)
        path = self.directory / f"{key}.json"
        if not path.exists():
            raise FixtureMissError(
                f"no fixture for prompt hash {key[:16]}... in {self.directory}"
            )
        data = json.loads(path.read_text(encoding="utf-8"))
        return data["response"]


def record_fixture(directory, messages, response) -> Path:
    """Author a fixture file for the given exchange."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    key = prompt_key(messages)
    path = directory / f"{key}.json"
    path.write_text(
        json.dumps({"request": messages, "response": response}, indent=2) + "\n",
        encoding="utf-8",
    )
    return path


# ---------------------------------------------------------------------------
# Pipeline

_REFUSAL_MARKERS = (
    "i can't help",
    "i cannot help",
    "i won't write",
    "i will not write",
    "i can't assist",
    "i cannot assist",
    "i'm not able to",
    "i am not able to",
    "i must decline",
)


def looks_like_refusal(text: str) -> bool:
    lowered = text.lower()
    return any(marker in lowered for marker in _REFUSAL_MARKERS)


def extract_dsl(text: str) -> str:
    """Pull the strategy block out of a fenced response, or return as-is."""
    if "```" in text:
        parts = text.split("```")
        for part in parts[1:]:
            body = part
            if body.startswith(("ipd", "IPD")):
                body = body[3:]
            body = body.strip("\n")
            if "strategy" in body:
                return body
    return text.strip()


def refine_loop(initial: str, transport, transcript=None) -> str:
    """One critique turn and one rewrite turn; returns the rewritten text."""
    if transcript is None:
        transcript = []
    crit_messages = critique_prompt(initial)
    critique = transport.complete(crit_messages)
    transcript.append({"request": crit_messages, "response": critique})
    rw_messages = rewrite_prompt(initial, critique)
    rewritten = transport.complete(rw_messages)
    transcript.append({"request": rw_messages, "response": rewritten})
    return rewritten


def _elicit_natural_language(job: GenerationJob, transport, transcript, index):
    if job.style is PromptStyle.PROSE:
        rng = substream("prose-scenario", job.seed, index)
        scenario = SCENARIOS[rng.randrange(len(SCENARIOS))]
        phase1, phase2 = prose_prompts(job.attitude, scenario)
        high_level = transport.complete(phase1)
        transcript.append({"request": phase1, "response": high_level})
        if looks_like_refusal(high_level):
            return high_level, True
        messages = phase2(high_level)
        concrete = transport.complete(messages)
        transcript.append({"request": messages, "response": concrete})
        return concrete, looks_like_refusal(concrete)

    messages = default_prompt(job.attitude)
    text = transport.complete(messages)
    transcript.append({"request": messages, "response": text})
    if looks_like_refusal(text):
        return text, True
    if job.style is PromptStyle.REFINE:
        text = refine_loop(text, transport, transcript)
        if looks_like_refusal(text):
            return text, True
    return text, False


def generate_strategy(job: GenerationJob, transport, index: int = 0) -> GenerationRecord:
    """Elicit one strategy, convert it to the DSL and vet it."""
    transcript = []
    natural, refused = _elicit_natural_language(job, transport, transcript, index)
    if refused:
        return GenerationRecord(natural, None, Verdict.REFUSED, transcript)

    diagnostics = None
    verdict = Verdict.PARSE_FAILED
    for _ in range(job.max_retries + 1):
        messages = conversion_prompt(natural, job.attitude, diagnostics)
        response = transport.complete(messages)
        transcript.append({"request": messages, "response": response})
        if response.strip() == "INEXPRESSIBLE":
            return GenerationRecord(natural, None, Verdict.INEXPRESSIBLE, transcript)
        source = extract_dsl(response)
        try:
            spec = dsl.parse(source)
        except dsl.ParseError as exc:
            diagnostics = [exc]
            verdict = Verdict.PARSE_FAILED
            continue
        diags = dsl.validate(spec)
        errors = [d for d in diags if d.severity == "error"]
        if errors:
            diagnostics = errors
            verdict = Verdict.VALIDATION_FAILED
            continue
        if spec.attitude != job.attitude.value:
            diagnostics = [
                f"strategy is labelled {spec.attitude!r}, expected "
                f"{job.attitude.value!r}"
            ]
            verdict = Verdict.VALIDATION_FAILED
            continue
        return GenerationRecord(natural, source, Verdict.ADMITTED, transcript)
    return GenerationRecord(natural, None, verdict, transcript)


def _header_comment(natural_language: str) -> str:
    lines = natural_language.splitlines() or [""]
    return "\n".join(f"# {line}" if line else "#" for line in lines)


def build_bank(job: GenerationJob, transport, out_dir, audit_match=None):
    """Generate strategies until `count` admissions; write the bank to disk.

    Returns (AttitudeBank, report dict). If the output root ends up holding
    all three attitudes, an audit runs and its verdict lands in the report.
    """
    from .bank import audit_bank as run_audit
    from .bank import load_bank, load_banks
    from .game import MatchConfig

    out_dir = Path(out_dir)
    attitude_dir = out_dir / job.attitude.value
    attitude_dir.mkdir(parents=True, exist_ok=True)

    admitted = []
    rejections = []
    manifest = {}
    attempts = 0
    max_attempts = job.count * (job.max_retries + 3)
    while len(admitted) < job.count:
        if attempts >= max_attempts:
            raise ExhaustedRetriesError(
                f"gave up after {attempts} attempts with "
                f"{len(admitted)}/{job.count} admitted",
                last_verdict=rejections[-1].verdict if rejections else None,
            )
        record = generate_strategy(job, transport, index=attempts)
        attempts += 1
        if record.verdict is not Verdict.ADMITTED:
            rejections.append(record)
            continue
        spec = dsl.parse(record.dsl_source)
        index = len(admitted)
        filename = f"{index:02d}_{spec.name}.ipd"
        source = _header_comment(record.natural_language) + "\n" + record.dsl_source
        if not source.endswith("\n"):
            source += "\n"
        (attitude_dir / filename).write_text(source, encoding="utf-8")
        manifest[filename] = {
            "model": job.model,
            "converter_model": job.converter_model or job.model,
            "prompt_style": job.style.value,
            "natural_language": record.natural_language,
        }
        admitted.append(record)

    (attitude_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    bank = load_bank(attitude_dir, job.attitude)

    report = {
        "attitude": job.attitude.value,
        "admitted": len(admitted),
        "attempts": attempts,
        "rejections": [
            {"verdict": r.verdict.value, "natural_language": r.natural_language}
            for r in rejections
        ],
        "faithful": None,
    }
    have_all = all(
        (out_dir / att).is_dir() and list((out_dir / att).glob("*.ipd"))
        for att in ("aggressive", "cooperative", "neutral")
    )
    if have_all:
        banks = load_banks(out_dir)
        match = audit_match or MatchConfig(rounds=200, seed=job.seed)
        audit = run_audit(banks, match, seed=job.seed)
        report["faithful"] = audit.faithful
    return bank, report
