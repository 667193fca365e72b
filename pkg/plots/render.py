#!/usr/bin/env python3
"""Render figures from the engine's result CSVs.

Reads the shared csv_schema.json contract at the repository root; input
files must match it column-for-column. This layer never recomputes
statistics beyond medians and orderings — the numbers come from the CSVs.

Usage:
    plots/render.py --kind beaufils-violin --in beaufils_scores.csv --out fig2.svg
"""

import argparse
import csv
import json
import statistics
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


SCHEMA_PATH = Path(__file__).resolve().parent.parent / "csv_schema.json"

KINDS = ("beaufils-violin", "moran-trajectory", "matrix-heatmap")

ATTITUDES = ("aggressive", "cooperative", "neutral")
ATTITUDE_COLORS = {
    "aggressive": "tab:red",
    "cooperative": "tab:green",
    "neutral": "tab:blue",
}


class SchemaError(Exception):
    """Input header deviates from the shared CSV contract."""


class EmptyInputError(Exception):
    """Input parses but holds no data rows."""


def load_schema():
    return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))


def read_rows(path, schema_kind):
    """Read a CSV whose header matches the contract exactly."""
    expected = load_schema()[schema_kind]
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path} is empty") from None
        for column in header:
            if column not in expected:
                raise SchemaError(f"unknown column {column!r} in {path}")
        for column in expected:
            if column not in header:
                raise SchemaError(f"missing column {column!r} in {path}")
        if header != list(expected):
            raise SchemaError(
                f"column order mismatch in {path}: {header} != {expected}"
            )
        rows = [dict(zip(header, row)) for row in reader if row]
    if not rows:
        raise EmptyInputError(f"{path} holds a header but no rows")
    return rows


# ---------------------------------------------------------------------------
# Figure builders (return the figure so tests can inspect shapes)

def beaufils_violin_figure(rows, title=None):
    scores = {}
    for row in rows:
        scores.setdefault(row["participant"], []).append(
            float(row["tournament_score"])
        )
    participants = list(scores)
    data = [scores[name] for name in participants]
    medians = [statistics.median(values) for values in data]

    fig, ax = plt.subplots(figsize=(max(6, 0.8 * len(participants)), 4.5))
    positions = range(1, len(participants) + 1)
    ax.violinplot(data, positions=positions, showextrema=False, widths=0.8)
    ax.scatter(positions, medians, marker="_", s=300, color="black",
               zorder=3, label="median")
    ax.set_xticks(list(positions))
    ax.set_xticklabels(participants, rotation=45, ha="right")
    ax.set_ylabel("tournament score (mean round payoff)")
    ax.set_title(title or "Tournament score distributions")
    ax.legend(loc="upper right")
    fig.tight_layout()
    return fig


def moran_trajectory_figure(rows, title=None):
    iterations = [int(row["iteration"]) for row in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for attitude in ATTITUDES:
        ax.plot(
            iterations,
            [int(row[attitude]) for row in rows],
            label=attitude,
            color=ATTITUDE_COLORS[attitude],
        )
    ax.set_xlabel("iteration")
    ax.set_ylabel("population count")
    ax.set_title(title or "Moran process trajectory")
    ax.legend()
    fig.tight_layout()
    return fig


def matrix_heatmap_figure(rows, value_column, title=None):
    matrix = [[float("nan")] * 3 for _ in range(3)]
    for row in rows:
        i = ATTITUDES.index(row["row_attitude"])
        j = ATTITUDES.index(row["col_attitude"])
        matrix[i][j] = float(row[value_column])

    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    image = ax.imshow(matrix, cmap="viridis")
    ax.set_xticks(range(3))
    ax.set_yticks(range(3))
    ax.set_xticklabels(ATTITUDES)
    ax.set_yticklabels(ATTITUDES)
    for i in range(3):
        for j in range(3):
            value = matrix[i][j]
            if value == value:  # not NaN
                ax.text(j, i, f"{value:.2f}", ha="center", va="center",
                        color="white")
    fig.colorbar(image, ax=ax, label=value_column)
    ax.set_title(title or f"Attitude matrix: {value_column}")
    fig.tight_layout()
    return fig


# ---------------------------------------------------------------------------
# CLI

def _heatmap_kind(path):
    """A heatmap input is either the head-to-head or the cooperation CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh), [])
    schema = load_schema()
    if header == schema["head_to_head"]:
        return "head_to_head", "normalized_payoff"
    if header == schema["cooperation"]:
        return "cooperation", "propensity"
    raise SchemaError(
        f"{path} matches neither the head-to-head nor the cooperation header"
    )


def render(kind, in_path, out_path, title=None):
    if kind == "beaufils-violin":
        fig = beaufils_violin_figure(read_rows(in_path, "beaufils_scores"), title)
    elif kind == "moran-trajectory":
        fig = moran_trajectory_figure(read_rows(in_path, "trajectory"), title)
    elif kind == "matrix-heatmap":
        schema_kind, value_column = _heatmap_kind(in_path)
        fig = matrix_heatmap_figure(
            read_rows(in_path, schema_kind), value_column, title
        )
    else:
        raise ValueError(f"unknown kind {kind!r}")
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="in_path", required=True)
    parser.add_argument("--out", dest="out_path", required=True)
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    try:
        render(args.kind, args.in_path, args.out_path, args.title)
    except (SchemaError, EmptyInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
