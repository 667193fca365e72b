"""evoipd command-line interface.

Exit codes: 0 success, 1 experiment-stage failure, 2 configuration error.
Progress goes to stderr; data goes to files and stdout only.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import sys
from pathlib import Path

import click

from . import __version__, csvio
from .bank import (
    ATTITUDE_ORDER,
    Attitude,
    audit_bank,
    load_banks,
    resolve_banks_root,
)
from .classics import BEAUFILS_ROSTER, classic
from .errors import ConfigError, EvoIpdError
from .game import MatchConfig
from .ingest import (
    FixtureTransport,
    GenerationJob,
    HttpTransport,
    PromptStyle,
    build_bank,
)
from .moran import MoranConfig, parse_initial_ratio, run_batch
from .tournament import (
    FixedPlayer,
    TournamentConfig,
    cooperation_matrix,
    run_tournament,
)
from .tournament import beaufils_harness as run_beaufils


def _progress(message):
    click.echo(message, err=True)


def _load_banks_or_exit(banks_arg):
    root = resolve_banks_root(banks_arg)
    if not root.is_dir():
        _progress(f"error: bank directory not found: {root}")
        sys.exit(2)
    try:
        return load_banks(root)
    except ConfigError as exc:
        _progress(f"error: {exc}")
        sys.exit(2)
    except EvoIpdError as exc:
        _progress(f"error loading banks: {exc}")
        sys.exit(1)


def _default_workers():
    return os.cpu_count() or 1


def _bank_players(banks):
    return tuple(
        FixedPlayer(s, attitude=att)
        for att in ATTITUDE_ORDER
        for s in banks[att].strategies
    )


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@click.group()
@click.version_option(version=__version__, prog_name="evoipd")
def main():
    """Iterated Prisoner's Dilemma evaluation engine."""


@main.command()
@click.option("--banks", "banks_arg", required=True, help="Bank root dir or 'bundled'.")
@click.option("--rounds", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--threads", default=None, type=int)
def validate(banks_arg, rounds, seed, threads):
    """Load the banks, audit attitude fidelity, print the matrix."""
    banks = _load_banks_or_exit(banks_arg)
    workers = threads or _default_workers()
    report = audit_bank(banks, MatchConfig(rounds=rounds, seed=seed), seed=seed,
                        workers=workers)
    for att in ATTITUDE_ORDER:
        _progress(f"{att.value}: {report.bank_sizes.get(att, 0)} strategies")
    header = "              " + "".join(f"{c.value:>14}" for c in ATTITUDE_ORDER)
    click.echo(header)
    for row in ATTITUDE_ORDER:
        cells = []
        for col in ATTITUDE_ORDER:
            value = report.cell(row, col)
            cells.append(f"{value:14.3f}" if value is not None else f"{'-':>14}")
        click.echo(f"{row.value:<14}" + "".join(cells))
    click.echo(f"FAITHFUL: {report.faithful}")
    sys.exit(0 if report.faithful else 1)


@main.command()
@click.option("--banks", "banks_arg", required=True)
@click.option("--noise", default=0.0, show_default=True)
@click.option("--repetitions", default=20, show_default=True)
@click.option("--rounds", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--threads", default=None, type=int)
@click.option("--keep-matches", is_flag=True, default=False)
@click.option("--prompt-style", default="default", show_default=True)
@click.option("--model", default="bundled", show_default=True)
def tournament(banks_arg, noise, repetitions, rounds, seed, out_dir, threads,
               keep_matches, prompt_style, model):
    """All-play-all tournament over every bank strategy; emits the
    head-to-head and cooperation CSVs."""
    banks = _load_banks_or_exit(banks_arg)
    out = Path(out_dir)
    workers = threads or _default_workers()
    config = TournamentConfig(
        players=_bank_players(banks),
        repetitions=repetitions,
        match=MatchConfig(rounds=rounds, noise_prob=noise, seed=seed),
        seed=seed,
    )
    _progress(
        f"tournament: {len(config.players)} players, {repetitions} repetitions, "
        f"noise {noise}"
    )
    result = run_tournament(config, workers=workers, keep_matches=keep_matches)
    csvio.write_head_to_head(
        out / "head_to_head.csv", result.head_to_head(), noise,
        prompt_style=prompt_style, model=model,
    )
    csvio.write_cooperation(
        out / "cooperation.csv", cooperation_matrix(result), noise,
        prompt_style=prompt_style, model=model,
    )
    if keep_matches:
        records_path = out / "matches.jsonl"
        with open(records_path, "w", encoding="utf-8") as fh:
            for key in sorted(result.records):
                rep, match_index = key
                row = {"repetition": rep, "match": match_index}
                row.update(result.records[key].to_json())
                fh.write(json.dumps(row) + "\n")
    _progress(f"wrote {out / 'head_to_head.csv'} and {out / 'cooperation.csv'}")


@main.command()
@click.option("--banks", "banks_arg", required=True)
@click.option("--roster", "roster_file", default=None, type=click.Path(exists=True),
              help="File with one classic strategy name per line.")
@click.option("--repetitions", default=200, show_default=True)
@click.option("--rounds", default=1000, show_default=True)
@click.option("--noise", default=0.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--threads", default=None, type=int)
def beaufils(banks_arg, roster_file, repetitions, rounds, noise, seed, out_dir,
             threads):
    """Attitude-agents vs the classic roster; emits beaufils_scores.csv."""
    banks = _load_banks_or_exit(banks_arg)
    if roster_file:
        names = [
            line.strip()
            for line in Path(roster_file).read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.startswith("#")
        ]
    else:
        names = list(BEAUFILS_ROSTER)
    try:
        roster = [classic(name) for name in names]
    except EvoIpdError as exc:
        _progress(f"error: {exc}")
        sys.exit(2)
    workers = threads or _default_workers()
    _progress(f"beaufils: {len(roster)} classics + 3 agents, {repetitions} reps")
    distributions = run_beaufils(
        banks, roster, repetitions,
        MatchConfig(rounds=rounds, noise_prob=noise, seed=seed),
        seed, workers=workers,
    )
    out = Path(out_dir)
    csvio.write_beaufils_scores(out / "beaufils_scores.csv", distributions)
    _progress(f"wrote {out / 'beaufils_scores.csv'}")


@main.command()
@click.option("--banks", "banks_arg", required=True)
@click.option("--initial", default="4:4:4", show_default=True,
              help="Initial counts A:C:N (presets 1:1:1 -> 4:4:4, 4:1:1 -> 8:2:2).")
@click.option("--runs", default=100, show_default=True)
@click.option("--rounds", default=1000, show_default=True)
@click.option("--noise", default=0.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--max-iterations", default=100_000, show_default=True)
@click.option("--exclude-parent", is_flag=True, default=False)
@click.option("--trajectories/--no-trajectories", default=True, show_default=True)
@click.option("--prompt-style", default="default", show_default=True)
@click.option("--model", default="bundled", show_default=True)
def moran(banks_arg, initial, runs, rounds, noise, seed, out_dir, max_iterations,
          exclude_parent, trajectories, prompt_style, model):
    """Batch of Moran processes; emits equilibria.csv and trajectories."""
    banks = _load_banks_or_exit(banks_arg)
    try:
        counts = parse_initial_ratio(initial)
        config = MoranConfig(
            banks=banks, initial_counts=counts,
            match=MatchConfig(rounds=rounds, noise_prob=noise, seed=seed),
            seed=seed, max_iterations=max_iterations,
            exclude_parent=exclude_parent,
        )
    except ConfigError as exc:
        _progress(f"error: {exc}")
        sys.exit(2)
    _progress(f"moran: n={config.population_size}, {runs} runs, noise {noise}")
    batch = run_batch(config, runs)
    out = Path(out_dir)
    csvio.write_equilibria(
        out / "equilibria.csv", [(noise, initial, batch)],
        prompt_style=prompt_style, model=model,
    )
    if trajectories:
        for outcome in batch.outcomes:
            csvio.write_trajectory(
                out / f"trajectory_{outcome.run_index:04d}.csv", outcome
            )
    if batch.errors:
        for run_index, exc in batch.errors:
            _progress(f"run {run_index} failed: {exc}")
        sys.exit(1)
    _progress(f"wrote {out / 'equilibria.csv'}")


@main.command()
@click.option("--endpoint", default=None, help="Chat-completions URL.")
@click.option("--model", default="default-model", show_default=True)
@click.option("--converter-model", default=None)
@click.option("--style", type=click.Choice([s.value for s in PromptStyle]),
              default="default", show_default=True)
@click.option("--attitude", "attitude_arg",
              type=click.Choice([a.value for a in ATTITUDE_ORDER]), required=True)
@click.option("--count", default=25, show_default=True)
@click.option("--max-retries", default=2, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--fixtures", default=None, type=click.Path(exists=True),
              help="Replay recorded fixtures instead of calling an endpoint.")
def generate(endpoint, model, converter_model, style, attitude_arg, count,
             max_retries, seed, out_dir, fixtures):
    """Generate a strategy bank through an LLM endpoint (or fixtures)."""
    if fixtures:
        transport = FixtureTransport(fixtures)
    elif endpoint:
        transport = HttpTransport(endpoint, model)
    else:
        _progress("error: provide --endpoint or --fixtures")
        sys.exit(2)
    job = GenerationJob(
        model=model,
        style=PromptStyle(style),
        attitude=Attitude.from_str(attitude_arg),
        count=count,
        max_retries=max_retries,
        seed=seed,
        converter_model=converter_model,
    )
    try:
        bank, report = build_bank(job, transport, out_dir)
    except EvoIpdError as exc:
        _progress(f"error: {exc}")
        sys.exit(1)
    click.echo(json.dumps(report, indent=2))
    _progress(f"admitted {len(bank)} strategies into {out_dir}/{attitude_arg}")


def _load_toml(path):
    import tomli

    with open(path, "rb") as fh:
        return tomli.load(fh)


@main.command("run-all")
@click.option("--config", "config_file", default=None, type=click.Path())
@click.option("--banks", "banks_arg", default=None)
@click.option("--out", "out_dir", default=None, type=click.Path())
@click.option("--seed", default=None, type=int)
@click.option("--threads", default=None, type=int)
@click.option("--tournament-repetitions", default=None, type=int)
@click.option("--beaufils-repetitions", default=None, type=int)
@click.option("--moran-runs", default=None, type=int)
@click.option("--rounds", default=None, type=int)
def run_all(config_file, banks_arg, out_dir, seed, threads,
            tournament_repetitions, beaufils_repetitions, moran_runs, rounds):
    """Full pipeline: validate, tournaments, Moran batches, Beaufils harness.

    Defaults follow the reference experiment grid: noise {0, 0.1}, 20
    tournament repetitions, 100 Moran runs with 4:4:4 and 8:2:2 starts,
    200 Beaufils repetitions, 1000-round matches.
    """
    settings = {
        "banks": "bundled",
        "out": "results",
        "seed": 0,
        "rounds": 1000,
        "noise_levels": [0.0, 0.1],
        "tournament_repetitions": 20,
        "beaufils_repetitions": 200,
        "moran_runs": 100,
        "initial_ratios": ["4:4:4", "8:2:2"],
        "prompt_style": "default",
        "model": "bundled",
    }
    if config_file:
        if not Path(config_file).exists():
            _progress(f"error: config file not found: {config_file}")
            sys.exit(2)
        settings.update(_load_toml(config_file))
    for key, value in (
        ("banks", banks_arg), ("out", out_dir), ("seed", seed),
        ("tournament_repetitions", tournament_repetitions),
        ("beaufils_repetitions", beaufils_repetitions),
        ("moran_runs", moran_runs), ("rounds", rounds),
    ):
        if value is not None:
            settings[key] = value

    workers = threads or _default_workers()
    out = Path(settings["out"])
    out.mkdir(parents=True, exist_ok=True)
    master_seed = int(settings["seed"])
    match_rounds = int(settings["rounds"])
    style, model = settings["prompt_style"], settings["model"]

    manifest = {
        "engine_version": __version__,
        "seed": master_seed,
        "config": settings,
        "files": {},
        "complete": False,
    }
    manifest["config_hash"] = hashlib.sha256(
        json.dumps(settings, sort_keys=True, default=str).encode()
    ).hexdigest()
    manifest_path = out / "run_manifest.json"

    def flush_manifest():
        manifest_path.write_text(
            json.dumps(manifest, indent=2, default=str) + "\n", encoding="utf-8"
        )

    def register(path: Path):
        manifest["files"][str(path.relative_to(out))] = _sha256(path)
        flush_manifest()

    try:
        banks = _load_banks_or_exit(settings["banks"])

        _progress("stage 1/4: bank audit")
        report = audit_bank(
            banks, MatchConfig(rounds=match_rounds, seed=master_seed),
            seed=master_seed, workers=workers,
        )
        if not report.faithful:
            _progress("error: bank set failed the fidelity audit")
            sys.exit(1)

        _progress("stage 2/4: tournaments")
        players = _bank_players(banks)
        for noise in settings["noise_levels"]:
            config = TournamentConfig(
                players=players,
                repetitions=int(settings["tournament_repetitions"]),
                match=MatchConfig(
                    rounds=match_rounds, noise_prob=float(noise), seed=master_seed
                ),
                seed=master_seed,
            )
            result = run_tournament(config, workers=workers)
            tag = str(noise).replace(".", "p")
            register(csvio.write_head_to_head(
                out / f"head_to_head_noise{tag}.csv", result.head_to_head(),
                noise, prompt_style=style, model=model,
            ))
            register(csvio.write_cooperation(
                out / f"cooperation_noise{tag}.csv", cooperation_matrix(result),
                noise, prompt_style=style, model=model,
            ))

        _progress("stage 3/4: Moran processes")
        batches = []
        trajectory_dir = out / "trajectories"
        for noise in settings["noise_levels"]:
            for ratio in settings["initial_ratios"]:
                config = MoranConfig(
                    banks=banks,
                    initial_counts=parse_initial_ratio(str(ratio)),
                    match=MatchConfig(
                        rounds=match_rounds, noise_prob=float(noise),
                        seed=master_seed,
                    ),
                    seed=master_seed,
                )
                batch = run_batch(config, int(settings["moran_runs"]))
                if batch.errors:
                    _progress(f"error: {len(batch.errors)} Moran runs failed")
                    sys.exit(1)
                batches.append((noise, str(ratio), batch))
                tag = f"noise{str(noise).replace('.', 'p')}_{str(ratio).replace(':', '-')}"
                for outcome in batch.outcomes[:1]:
                    register(csvio.write_trajectory(
                        trajectory_dir / f"trajectory_{tag}_{outcome.run_index:04d}.csv",
                        outcome,
                    ))
        register(csvio.write_equilibria(
            out / "equilibria.csv", batches, prompt_style=style, model=model,
        ))

        _progress("stage 4/4: Beaufils harness")
        roster = [classic(name) for name in BEAUFILS_ROSTER]
        distributions = run_beaufils(
            banks, roster, int(settings["beaufils_repetitions"]),
            MatchConfig(rounds=match_rounds, seed=master_seed),
            master_seed, workers=workers,
        )
        register(csvio.write_beaufils_scores(
            out / "beaufils_scores.csv", distributions
        ))

        manifest["complete"] = True
        flush_manifest()
        _progress(f"done; manifest at {manifest_path}")
    except EvoIpdError as exc:
        flush_manifest()
        _progress(f"error: {exc}")
        sys.exit(1)


@main.command()
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True))
def report(in_dir):
    """Print human-readable tables from a results directory."""
    in_dir = Path(in_dir)
    found = False
    for path in sorted(in_dir.glob("*.csv")):
        found = True
        click.echo(f"== {path.name}")
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        for row in rows:
            click.echo("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
        click.echo("")
    if not found:
        _progress(f"error: no CSV files in {in_dir}")
        sys.exit(2)


if __name__ == "__main__":
    main()
