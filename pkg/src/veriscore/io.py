"""Forecast case containers, CSV schemas, and deterministic output.

All numeric output is serialized with 12 significant digits via
``fmt12``.  Summary statistics are computed from the rounded per-case
values, not the raw ones, so that a summary recomputed from a written
per-case file reproduces the written summary bit for bit.  Output
never embeds timestamps or environment details; identical inputs give
byte-identical files.

CSV schemas
-----------
Single system (``read_cases_csv`` / ``write_cases_csv``)::

    case_id, forecast, obs

Paired systems (``read_paired_csv`` / ``write_paired_csv``)::

    case_id, forecast_a, forecast_b, obs

Rows pair two forecasts with one shared observation; blank lines are
skipped, every value must be a finite number, and errors cite the file
and line.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "fmt12",
    "round12",
    "round12_array",
    "mean_of_rounded",
    "ForecastCase",
    "CaseSet",
    "read_cases_csv",
    "write_cases_csv",
    "read_paired_csv",
    "write_paired_csv",
    "write_scores_csv",
    "write_json",
]


def fmt12(x) -> str:
    """Decimal string with 12 significant digits."""
    return f"{float(x):.12g}"


def round12(x) -> float:
    """Nearest float to the 12-significant-digit decimal of x."""
    return float(fmt12(x))


def round12_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    return np.asarray([round12(v) for v in arr.ravel()]).reshape(arr.shape)


def mean_of_rounded(values) -> float:
    """Mean over the serialized (rounded) values, rounded once more.

    This is the mean a reader of the written per-case file would
    compute, which keeps written summaries reproducible from written
    cases.
    """
    return round12(np.mean(round12_array(values)))


@dataclass(frozen=True)
class ForecastCase:
    """One point forecast and the matching observation."""

    case_id: str
    forecast: float
    observation: float


class CaseSet:
    """Aligned arrays of forecast cases for one forecast system."""

    def __init__(self, ids, forecasts, observations):
        ids = tuple(str(i) for i in ids)
        x = np.atleast_1d(np.asarray(forecasts, dtype=float))
        y = np.atleast_1d(np.asarray(observations, dtype=float))
        if x.ndim != 1 or x.shape != y.shape or len(ids) != x.size:
            raise ValidationError(
                "ids, forecasts and observations must have equal length"
            )
        if x.size == 0:
            raise ValidationError("a case set needs at least one case")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValidationError("forecasts and observations must be finite")
        if any(not i for i in ids):
            raise ValidationError("case ids must be non-empty")
        if len(set(ids)) != len(ids):
            raise ValidationError("case ids must be unique")
        self.ids = ids
        self.forecasts = x
        self.observations = y

    @classmethod
    def from_cases(cls, cases) -> "CaseSet":
        cases = list(cases)
        return cls(
            [c.case_id for c in cases],
            [c.forecast for c in cases],
            [c.observation for c in cases],
        )

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        for i, cid in enumerate(self.ids):
            yield ForecastCase(cid, float(self.forecasts[i]), float(self.observations[i]))

    def case(self, case_id: str) -> ForecastCase:
        try:
            i = self.ids.index(case_id)
        except ValueError:
            raise ValidationError(f"no case with id {case_id!r}") from None
        return ForecastCase(case_id, float(self.forecasts[i]), float(self.observations[i]))


def _open_read(path):
    try:
        return open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None


def _parse_num(cell: str, path, lineno: int, name: str) -> float:
    try:
        val = float(cell)
    except ValueError:
        raise ValidationError(
            f"{path}:{lineno}: {name} value {cell.strip()!r} is not a number"
        ) from None
    if not np.isfinite(val):
        raise ValidationError(f"{path}:{lineno}: {name} value must be finite")
    return val


def _read_table(path, columns: list[str]) -> list[list[str]]:
    with _open_read(path) as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        if header != columns:
            raise ValidationError(
                f"{path}: expected header {columns!r}, got {header!r}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(columns):
                raise ValidationError(
                    f"{path}:{lineno}: expected {len(columns)} columns, "
                    f"got {len(row)}"
                )
            rows.append([lineno] + row)
    if not rows:
        raise ValidationError(f"{path}: no forecast cases found")
    return rows


def read_cases_csv(path) -> CaseSet:
    """Read one system's cases (schema in the module docstring)."""
    rows = _read_table(path, ["case_id", "forecast", "obs"])
    ids, xs, ys = [], [], []
    for lineno, cid, fx, ob in rows:
        cid = cid.strip()
        if not cid:
            raise ValidationError(f"{path}:{lineno}: empty case_id")
        ids.append(cid)
        xs.append(_parse_num(fx, path, lineno, "forecast"))
        ys.append(_parse_num(ob, path, lineno, "obs"))
    if len(set(ids)) != len(ids):
        raise ValidationError(f"{path}: duplicate case ids")
    return CaseSet(ids, xs, ys)


def read_paired_csv(path) -> tuple[CaseSet, CaseSet]:
    """Read paired cases of two systems sharing observations."""
    rows = _read_table(path, ["case_id", "forecast_a", "forecast_b", "obs"])
    ids, xa, xb, ys = [], [], [], []
    for lineno, cid, fa, fb, ob in rows:
        cid = cid.strip()
        if not cid:
            raise ValidationError(f"{path}:{lineno}: empty case_id")
        ids.append(cid)
        xa.append(_parse_num(fa, path, lineno, "forecast_a"))
        xb.append(_parse_num(fb, path, lineno, "forecast_b"))
        ys.append(_parse_num(ob, path, lineno, "obs"))
    if len(set(ids)) != len(ids):
        raise ValidationError(f"{path}: duplicate case ids")
    return CaseSet(ids, xa, ys), CaseSet(ids, xb, ys)


def write_cases_csv(cases: CaseSet, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id", "forecast", "obs"])
        for c in cases:
            writer.writerow([c.case_id, fmt12(c.forecast), fmt12(c.observation)])


def write_paired_csv(cases_a: CaseSet, cases_b: CaseSet, path) -> None:
    if cases_a.ids != cases_b.ids:
        raise ValidationError("paired case sets must share ids in order")
    if not np.array_equal(cases_a.observations, cases_b.observations):
        raise ValidationError("paired case sets must share observations")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id", "forecast_a", "forecast_b", "obs"])
        for i, cid in enumerate(cases_a.ids):
            writer.writerow(
                [
                    cid,
                    fmt12(cases_a.forecasts[i]),
                    fmt12(cases_b.forecasts[i]),
                    fmt12(cases_a.observations[i]),
                ]
            )


def write_scores_csv(path, ids, columns: dict) -> None:
    """Per-case values: ``case_id`` plus one named numeric column each.

    ``columns`` maps column name to an array aligned with ids; ordering
    of the mapping is preserved in the file.
    """
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    for n, a in zip(names, arrays):
        if a.shape != (len(ids),):
            raise ValidationError(
                f"column {n!r} has shape {a.shape}, expected ({len(ids)},)"
            )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id"] + names)
        for i, cid in enumerate(ids):
            writer.writerow([cid] + [fmt12(a[i]) for a in arrays])


def write_json(obj, path) -> None:
    """Write JSON with stable layout: insertion order, indent 2."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False, allow_nan=False)
        fh.write("\n")
