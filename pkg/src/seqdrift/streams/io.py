"""CSV ingestion with train-fitted min-max scaling."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..errors import DataError
from .base import Stream, StreamMeta


class MinMaxScaler:
    """Per-column scaling to [0, 1] fitted on training rows.

    Constant columns map to 0.  Values outside the fitted range are clipped
    when ``clip`` is set.
    """

    def __init__(self, clip: bool = True):
        self.clip = clip
        self.lo = None
        self.span = None

    def fit(self, X) -> "MinMaxScaler":
        X = np.asarray(X, dtype=float)
        self.lo = X.min(axis=0)
        self.span = X.max(axis=0) - self.lo
        return self

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        safe = np.where(self.span > 0, self.span, 1.0)
        out = np.where(self.span > 0, (X - self.lo) / safe, 0.0)
        return np.clip(out, 0.0, 1.0) if self.clip else out

    def inverse_transform(self, Z) -> np.ndarray:
        return np.asarray(Z, dtype=float) * self.span + self.lo

    def fit_transform(self, X) -> np.ndarray:
        return self.fit(X).transform(X)


@dataclass
class CsvSchema:
    """Layout of a stream CSV file.

    The first ``n_train`` data rows form the training split; the rest is the
    test stream.  With ``label_column`` unset the file is unlabeled.
    """

    n_train: int
    label_column: Optional[str] = "label"
    delimiter: str = ","
    header: bool = True
    feature_columns: Optional[Sequence[str]] = None
    label_values: Optional[Sequence[str]] = None
    drift_points: list[int] = field(default_factory=list)
    normalize: bool = True


def _read_rows(path: Path, schema: CsvSchema):
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=schema.delimiter)
        if schema.header:
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty file") from None
        else:
            header = None
        rows = [(reader.line_num, row) for row in reader if row]
    return header, rows


def load_csv(path, schema: CsvSchema) -> tuple[Stream, Stream, StreamMeta]:
    path = Path(path)
    header, rows = _read_rows(path, schema)
    if header is None:
        width = len(rows[0][1]) if rows else 0
        header = [f"f{i}" for i in range(width)]
        if schema.label_column is not None:
            header[-1] = schema.label_column

    if schema.label_column is not None and schema.label_column not in header:
        raise DataError(f"{path}: label column {schema.label_column!r} not in header")
    if schema.feature_columns is None:
        feat_names = [h for h in header if h != schema.label_column]
    else:
        feat_names = list(schema.feature_columns)
        missing = set(feat_names) - set(header)
        if missing:
            raise DataError(f"{path}: feature columns not in header: {sorted(missing)}")
    feat_idx = [header.index(h) for h in feat_names]
    label_idx = header.index(schema.label_column) if schema.label_column is not None else None
    label_values = list(schema.label_values) if schema.label_values is not None else None

    X = np.empty((len(rows), len(feat_idx)))
    raw_labels = []
    for i, (line, row) in enumerate(rows):
        if len(row) != len(header):
            raise DataError(f"{path}: row {line} has {len(row)} fields, expected {len(header)}")
        try:
            X[i] = [float(row[j]) for j in feat_idx]
        except ValueError as exc:
            raise DataError(f"{path}: row {line}: {exc}") from None
        if not np.all(np.isfinite(X[i])):
            raise DataError(f"{path}: row {line} has non-finite values")
        if label_idx is not None:
            value = row[label_idx].strip()
            if label_values is not None and value not in label_values:
                raise DataError(f"{path}: row {line}: unknown label {value!r}")
            raw_labels.append(value)

    if not 0 < schema.n_train <= len(rows):
        raise DataError(f"{path}: n_train={schema.n_train} must split {len(rows)} rows")

    labels = None
    if label_idx is not None:
        if label_values is None:
            label_values = _natural_order(raw_labels)
        lookup = {v: k for k, v in enumerate(label_values)}
        labels = np.array([lookup[v] for v in raw_labels], dtype=np.int64)

    n = schema.n_train
    X_train, X_test = X[:n], X[n:]
    if schema.normalize:
        scaler = MinMaxScaler(clip=True).fit(X_train)
        X_train, X_test = scaler.transform(X_train), scaler.transform(X_test)
    train = Stream(X_train, None if labels is None else labels[:n])
    test = Stream(X_test, None if labels is None else labels[n:])
    meta = StreamMeta(dim=X.shape[1], label_names=list(label_values or []),
                      drift_points=list(schema.drift_points))
    return train, test, meta


def _natural_order(values):
    uniq = sorted(set(values))
    try:
        return sorted(uniq, key=float)
    except ValueError:
        return uniq


def write_csv(path, train: Stream, test: Stream, label_column: Optional[str] = "label",
              delimiter: str = ",", label_names: Optional[Sequence[str]] = None) -> None:
    """Write training rows then test rows in the layout :func:`load_csv` reads."""
    dim = train.dim
    header = [f"f{i}" for i in range(dim)]
    labeled = label_column is not None and train.labels is not None and test.labels is not None
    if labeled:
        header.append(label_column)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter)
        w.writerow(header)
        for block in (train, test):
            for i, x in enumerate(block.X):
                row = [repr(float(v)) for v in x]
                if labeled:
                    lab = int(block.labels[i])
                    row.append(label_names[lab] if label_names else lab)
                w.writerow(row)
