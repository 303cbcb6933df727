"""CSV exports for plots: rank densities, expected ranks, tau curves, heatmaps.

One file per artefact. Numeric cells carry 6 decimal places; heatmap cells on
or below the diagonal are left empty.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .metrics import AgreementMatrix
from .ranking import RankingResult
from .simulate import SimulationResult


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def write_density_csv(path: Path | str, result: RankingResult) -> None:
    """Rows per item (rank order), columns rank_1..rank_N."""
    items = result.ordered
    n = len(items)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["item_id"] + [f"rank_{r}" for r in range(1, n + 1)])
        for item in items:
            density = result.densities[item]
            writer.writerow([item] + [_fmt(p) for p in density.probabilities])


def write_expected_ranks_csv(path: Path | str, result: RankingResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["rank", "item_id", "expected_rank"])
        for position, item in enumerate(result.ordered, start=1):
            writer.writerow(
                [position, item, _fmt(result.densities[item].expected_rank)]
            )


def write_heatmap_csv(path: Path | str, matrix: AgreementMatrix, which: str) -> None:
    """One agreement grid ("map" or "eap"); header row is the item ids."""
    grid = matrix.map_values if which == "map" else matrix.eap_values
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["item_id"] + matrix.items)
        for item, row in zip(matrix.items, grid):
            writer.writerow(
                [item] + ["" if np.isnan(v) else _fmt(v) for v in row]
            )


def write_tau_curve_csv(path: Path | str, result: SimulationResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["comparisons", "tau_mean", "tau_sd"])
        for x, m, s in zip(result.comparisons, result.mean, result.sd):
            writer.writerow([int(x), _fmt(m), _fmt(s)])


def write_split_csv(path: Path | str, assignment: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["item_id", "group"])
        for group_index, members in enumerate(assignment, start=1):
            for item in members:
                writer.writerow([item, group_index])


def read_marks_csv(path: Path | str) -> list[tuple[str, float]]:
    """Input marks file with an `id,mark` header."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames[:2]] != ["id", "mark"]:
            raise ValueError(f"{path}: expected an 'id,mark' header")
        return [(row["id"], float(row["mark"])) for row in reader]
