"""Dataset ingestion, splits, and CSV result emission.

The input format is the classic sparse text format used by the LIBSVM
collection: one example per line, a numeric label followed by
whitespace-separated index:value features with 1-based, strictly
increasing indices.  Parsing is strict; any malformed token aborts with
the offending line number.  Parsed datasets are dense, matching the
d-by-d moment accumulation downstream; a warning is emitted past 5000
columns where dense storage stops being reasonable.

CSV output follows one fixed schema (the ResultRow field order) with
floats at 17 significant digits so a parse-back reproduces the exact
binary values.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping

import numpy as np

from .core import Dataset, PairRankError

__all__ = [
    "LibsvmParseError",
    "LibsvmLabelError",
    "ResultRow",
    "RESULT_CSV_HEADER",
    "parse_libsvm",
    "write_libsvm",
    "write_results_csv",
    "subsample_ratio_split",
]

# Columns past this count trigger a dense-storage warning.
_DENSE_WARN_DIM = 5000

_POSITIVE_LABELS = (1.0,)
_NEGATIVE_LABELS = (-1.0, 0.0)


class LibsvmParseError(PairRankError):
    """A structurally malformed line; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class LibsvmLabelError(LibsvmParseError):
    """A numeric label outside the recognized set {-1, 0, +1}."""


RESULT_CSV_HEADER = (
    "experiment_id",
    "algorithm",
    "dataset",
    "n1",
    "n0",
    "s",
    "seed",
    "phi_risk",
    "auc",
    "wall_time_seconds",
    "extra",
)


@dataclass(frozen=True, slots=True)
class ResultRow:
    """One experiment outcome destined for a CSV line.

    `s` is the pair-subsample size, 0 for all-pairs training.  `extra`
    holds free-form key-values (grid coordinates, reference risks),
    serialized as semicolon-joined key=value text in the last column.
    """

    experiment_id: str
    algorithm: str
    dataset: str
    n1: int
    n0: int
    s: int
    seed: int
    phi_risk: float
    auc: float
    wall_time_seconds: float
    extra: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 <= self.auc <= 1.0:
            raise ValueError(f"auc must lie in [0, 1], got {self.auc!r}")
        if not self.wall_time_seconds >= 0.0:
            raise ValueError(f"wall_time_seconds must be >= 0, got {self.wall_time_seconds!r}")
        for key, value in self.extra.items():
            if any(ch in key or ch in value for ch in "=;"):
                raise ValueError(f"extra entries may not contain '=' or ';': {key}={value}")

    def csv_cells(self) -> list[str]:
        """Values aligned with RESULT_CSV_HEADER; floats at 17 digits."""
        extra = ";".join(f"{k}={v}" for k, v in self.extra.items())
        return [
            self.experiment_id,
            self.algorithm,
            self.dataset,
            str(self.n1),
            str(self.n0),
            str(self.s),
            str(self.seed),
            f"{self.phi_risk:.17g}",
            f"{self.auc:.17g}",
            f"{self.wall_time_seconds:.17g}",
            extra,
        ]


def _parse_label(token: str, line_number: int) -> int:
    try:
        value = float(token)
    except ValueError as exc:
        raise LibsvmParseError(line_number, f"non-numeric label {token!r}") from exc
    if value in _POSITIVE_LABELS:
        return 1
    if value in _NEGATIVE_LABELS:
        return 0
    raise LibsvmLabelError(line_number, f"label {token!r} is not one of -1, 0, +1")


def _parse_feature(token: str, line_number: int, previous_index: int) -> tuple[int, float]:
    head, sep, tail = token.partition(":")
    if not sep or not head or not tail:
        raise LibsvmParseError(line_number, f"feature token {token!r} is not index:value")
    try:
        index = int(head)
    except ValueError as exc:
        raise LibsvmParseError(line_number, f"non-integer feature index in {token!r}") from exc
    if index < 1:
        raise LibsvmParseError(line_number, f"feature index {index} is not 1-based")
    if index <= previous_index:
        raise LibsvmParseError(
            line_number,
            f"feature index {index} does not increase (previous was {previous_index})",
        )
    try:
        value = float(tail)
    except ValueError as exc:
        raise LibsvmParseError(line_number, f"non-numeric feature value in {token!r}") from exc
    if not np.isfinite(value):
        raise LibsvmParseError(line_number, f"non-finite feature value in {token!r}")
    return index, value


def parse_libsvm(source: str | Path | IO[str], dim_hint: int | None = None) -> Dataset:
    """Parse sparse label index:value lines into a dense dataset.

    `source` is a path or an open text stream.  Labels +1/1 become the
    positive class and -1/0 the negative class.  The dimension is the
    larger of the maximum feature index and `dim_hint` (use the hint to
    align a test file with its training file's width).  Blank lines are
    skipped; anything else malformed raises with its line number.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="ascii") as handle:
            return parse_libsvm(handle, dim_hint=dim_hint)

    labels: list[int] = []
    rows: list[list[tuple[int, float]]] = []
    max_index = 0
    for line_number, line in enumerate(source, start=1):
        tokens = line.split()
        if not tokens:
            continue
        label = _parse_label(tokens[0], line_number)
        features: list[tuple[int, float]] = []
        previous = 0
        for token in tokens[1:]:
            index, value = _parse_feature(token, line_number, previous)
            features.append((index, value))
            previous = index
        if previous > max_index:
            max_index = previous
        labels.append(label)
        rows.append(features)

    dim = max(max_index, dim_hint or 0)
    if dim > _DENSE_WARN_DIM:
        warnings.warn(
            f"densifying {dim} columns; this format is parsed into dense storage",
            stacklevel=2,
        )
    n1 = sum(labels)
    pos = np.zeros((n1, dim), dtype=np.float64)
    neg = np.zeros((len(labels) - n1, dim), dtype=np.float64)
    cursors = [0, 0]
    for label, features in zip(labels, rows):
        target = pos if label == 1 else neg
        row = cursors[label]
        for index, value in features:
            target[row, index - 1] = value
        cursors[label] += 1
    return Dataset(positives=pos, negatives=neg, dim=dim)


def write_libsvm(data: Dataset, path: str | Path) -> None:
    """Write a dataset in the sparse text format (test helper).

    Positives first with label +1, then negatives with label -1; zero
    entries are omitted, indices are 1-based ascending.  Values use
    repr-style shortest round-trip formatting.
    """
    with open(path, "w", encoding="ascii") as handle:
        for label, matrix in (("+1", data.positives), ("-1", data.negatives)):
            for row in matrix:
                nonzero = np.flatnonzero(row != 0.0)
                cells = " ".join(f"{i + 1}:{float(row[i])!r}" for i in nonzero)
                handle.write(f"{label} {cells}".rstrip() + "\n")


def write_results_csv(rows: Iterable[ResultRow], path: str | Path) -> None:
    """Write header plus one line per row, RFC-4180 quoting."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(RESULT_CSV_HEADER)
        for row in rows:
            writer.writerow(row.csv_cells())


def subsample_ratio_split(data: Dataset, ratio: float, seed: int) -> Dataset:
    """Keep a uniform without-replacement fraction of all examples.

    Selects ceil(ratio * n) of the n examples, unstratified, so class
    counts vary with the seed while labels stay attached to their rows.
    Selection order: examples are numbered 0..n-1 with positives first;
    the kept set is the first ceil(ratio * n) entries of one PCG64
    permutation of that numbering.  A warning (not an error) is emitted
    if a class comes back empty; callers that train must then decide.
    """
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"ratio must lie in (0, 1], got {ratio!r}")
    if ratio == 1.0:
        return data
    total = data.n
    keep = int(np.ceil(ratio * total))
    rng = np.random.default_rng(seed)
    chosen = rng.permutation(total)[:keep]
    pos_idx = np.sort(chosen[chosen < data.n1])
    neg_idx = np.sort(chosen[chosen >= data.n1]) - data.n1
    result = Dataset(
        positives=data.positives[pos_idx],
        negatives=data.negatives[neg_idx],
        dim=data.dim,
    )
    if result.n1 == 0 or result.n0 == 0:
        warnings.warn(
            f"split left a class empty (n1={result.n1}, n0={result.n0}); "
            "the result is untrainable",
            stacklevel=2,
        )
    return result
