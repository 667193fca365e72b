"""CSV emission for tournament and Moran results.

Column layouts live in csv_schema.json, which is the shared contract with
the plotting package; writers assert against it so drift fails loudly.
"""

from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path

from .bank import ATTITUDE_ORDER


def load_schema() -> dict:
    text = (resources.files("evoipd") / "csv_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


_SCHEMA = None


def schema_columns(kind: str):
    global _SCHEMA
    if _SCHEMA is None:
        _SCHEMA = load_schema()
    return list(_SCHEMA[kind])


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _write(path, kind, rows):
    columns = schema_columns(kind)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            assert len(row) == len(columns), (kind, row)
            writer.writerow([_fmt(v) for v in row])
    return path


def write_head_to_head(path, matrix, noise, prompt_style="default", model="bundled"):
    """matrix: {(row Attitude, col Attitude): normalized payoff}."""
    rows = [
        (prompt_style, model, row.value, col.value, noise, matrix[(row, col)])
        for row in ATTITUDE_ORDER
        for col in ATTITUDE_ORDER
        if (row, col) in matrix
    ]
    return _write(path, "head_to_head", rows)


def write_cooperation(path, matrix, noise, prompt_style="default", model="bundled"):
    rows = [
        (prompt_style, model, row.value, col.value, noise, matrix[(row, col)])
        for row in ATTITUDE_ORDER
        for col in ATTITUDE_ORDER
        if (row, col) in matrix
    ]
    return _write(path, "cooperation", rows)


def write_beaufils_scores(path, distributions):
    """distributions: {participant: [score per repetition]}."""
    rows = [
        (name, rep, score)
        for name, scores in distributions.items()
        for rep, score in enumerate(scores)
    ]
    return _write(path, "beaufils_scores", rows)


def write_equilibria(
    path, batches, prompt_style="default", model="bundled"
):
    """batches: list of (noise, initial_ratio, BatchResult)."""
    rows = []
    for noise, ratio, batch in batches:
        for att in ATTITUDE_ORDER:
            rows.append(
                (
                    prompt_style,
                    model,
                    noise,
                    ratio,
                    att.value,
                    batch.proportions[att],
                    batch.runs,
                )
            )
    return _write(path, "equilibria", rows)


def write_trajectory(path, outcome):
    rows = [
        (iteration, agg, coop, neu)
        for iteration, (agg, coop, neu) in enumerate(outcome.trajectory)
    ]
    return _write(path, "trajectory", rows)
