"""Reader for the trial-record CSV contract.

The experiment runner emits one row per trial with a fixed ten-column header.
This module re-states that contract rather than importing the runner: the CSV
file is the interface. Optional fields are blank, booleans are lowercase
true/false, floats round-trip through repr.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

COLUMNS = (
    "trial_id",
    "algorithm",
    "n",
    "m",
    "eps_or_r",
    "delta",
    "samples_used",
    "realized_regret",
    "realized_gap",
    "contains_eps_optimal",
)


class SchemaError(ValueError):
    """Input CSV does not carry the trial-record column schema."""


@dataclass(frozen=True)
class Row:
    trial_id: int
    algorithm: str
    n: int
    m: int | None
    eps_or_r: float | None
    delta: float | None
    samples_used: int
    realized_regret: float
    realized_gap: float | None
    contains_eps_optimal: bool | None


def _opt(text: str, kind):
    return None if text == "" else kind(text)


def _bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise SchemaError(f"boolean field must be true/false, got {text!r}")
    return text == "true"


def read_rows(path: str | Path) -> list[Row]:
    """Parse one CSV; raises SchemaError naming any missing/unexpected column."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row") from None
        missing = [c for c in COLUMNS if c not in header]
        extra = [c for c in header if c not in COLUMNS]
        if missing or extra:
            parts = []
            if missing:
                parts.append(f"missing column(s) {missing}")
            if extra:
                parts.append(f"unexpected column(s) {extra}")
            raise SchemaError(f"{path}: {'; '.join(parts)}")
        if list(header) != list(COLUMNS):
            raise SchemaError(f"{path}: columns out of order, expected {list(COLUMNS)}")
        rows = []
        for raw in reader:
            if len(raw) != len(COLUMNS):
                raise SchemaError(f"{path}: row has {len(raw)} fields, expected {len(COLUMNS)}")
            rows.append(
                Row(
                    trial_id=int(raw[0]),
                    algorithm=raw[1],
                    n=int(raw[2]),
                    m=_opt(raw[3], int),
                    eps_or_r=_opt(raw[4], float),
                    delta=_opt(raw[5], float),
                    samples_used=int(raw[6]),
                    realized_regret=float(raw[7]),
                    realized_gap=_opt(raw[8], float),
                    contains_eps_optimal=_opt(raw[9], _bool),
                )
            )
    return rows


def read_many(paths) -> list[Row]:
    rows: list[Row] = []
    for path in paths:
        rows.extend(read_rows(path))
    return rows
