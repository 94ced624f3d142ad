"""CSV ingestion for the sphericity application: imputation, centering, sign projection.

Missing entries (empty cells or the literal "NA") are imputed by the column
mean of the observed entries; observations are centered at the column sample
mean; rows are then projected to spatial signs.
"""

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AllMissingColumn, MalformedCSV, ZeroVector

_MISSING = {"", "NA"}


@dataclass(frozen=True)
class IngestReport:
    n: int
    p: int
    missing: int
    imputed: int
    centering: np.ndarray  # vector subtracted from each row (zeros when centering is off)
    sample: np.ndarray     # post-pipeline n x p matrix


def _read_table(path: str) -> np.ndarray:
    rows: list[list[str]] = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if row:
                    rows.append([cell.strip() for cell in row])
    except OSError as exc:
        raise MalformedCSV(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise MalformedCSV(f"{path} is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MalformedCSV(f"{path} is not rectangular")

    def parse_cell(token: str) -> float:
        if token in _MISSING:
            return np.nan
        return float(token)

    def parse_row(tokens: list[str]) -> Optional[list[float]]:
        try:
            return [parse_cell(t) for t in tokens]
        except ValueError:
            return None

    first = parse_row(rows[0])
    body = rows if first is not None else rows[1:]
    if not body:
        raise MalformedCSV(f"{path} has a header but no data rows")
    data = []
    for i, raw in enumerate(body):
        parsed = parse_row(raw)
        if parsed is None:
            raise MalformedCSV(f"{path}: non-numeric entry in data row {i}")
        data.append(parsed)
    return np.asarray(data, dtype=float)


def ingest_csv(path: str, impute: bool = True, center: bool = True,
               project: bool = True) -> IngestReport:
    data = _read_table(path)
    n, p = data.shape
    missing_mask = np.isnan(data)
    missing = int(missing_mask.sum())
    imputed = 0
    if missing and not impute:
        raise MalformedCSV(f"{path} has {missing} missing cells and imputation is disabled")
    if impute and missing:
        for col in range(p):
            mask = missing_mask[:, col]
            if not mask.any():
                continue
            if mask.all():
                raise AllMissingColumn(f"column {col} has no observed entries")
            data[mask, col] = data[~mask, col].mean()
            imputed += int(mask.sum())
    centering = np.zeros(p)
    if center:
        centering = data.mean(axis=0)
        data = data - centering
    if project:
        norms = np.linalg.norm(data, axis=1)
        zero = np.flatnonzero(norms == 0.0)
        if zero.size:
            raise ZeroVector(f"row {int(zero[0])} became the zero vector")
        data = data / norms[:, None]
    return IngestReport(n=n, p=p, missing=missing, imputed=imputed,
                        centering=centering, sample=data)


def write_matrix_csv(path: str, matrix: np.ndarray) -> None:
    """Write a matrix with shortest round-trip (17 significant digit) floats."""
    matrix = np.asarray(matrix, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in matrix:
            writer.writerow([repr(float(v)) for v in row])
