"""Loading, validation and synthesis of integer-coded categorical data sets.

Category strings are interned per feature in first-appearance order, so codes
are dense 0-based integers and per-cluster frequency tables can be flat
arrays. Missing cells are stored as the sentinel code -1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

MISSING = -1


class DatasetError(ValueError):
    """Raised for malformed input files or invalid dataset parameters."""


@dataclass
class Dataset:
    """Immutable integer-coded categorical data matrix.

    Attributes:
        values: (n, d) int32 matrix of value codes, MISSING (-1) for nulls.
        vocab: per-feature list of original category strings; code t in
            column r decodes to vocab[r][t].
        feature_names: d column names.
        label_column: optional (n,) int array of ground-truth class codes,
            kept out of `values` and never consumed by clustering.
        label_vocab: original class strings for label_column codes.
    """

    values: np.ndarray
    vocab: list[list[str]]
    feature_names: list[str]
    label_column: np.ndarray | None = None
    label_vocab: list[str] | None = None

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.int32)
        if self.values.ndim != 2 or self.values.shape[0] < 1 or self.values.shape[1] < 1:
            raise DatasetError("dataset must be a non-empty 2-D table")
        if len(self.vocab) != self.d or len(self.feature_names) != self.d:
            raise DatasetError("vocab/feature_names length must equal feature count")
        for r, words in enumerate(self.vocab):
            if len(words) < 1:
                raise DatasetError(f"feature {r} has an empty vocabulary")
            if len(set(words)) != len(words):
                raise DatasetError(f"feature {r} has duplicate vocabulary entries")
            col = self.values[:, r]
            valid = col[col != MISSING]
            if valid.size and (valid.min() < 0 or valid.max() >= len(words)):
                raise DatasetError(f"feature {r} contains codes outside its vocabulary")
        if self.label_column is not None:
            self.label_column = np.asarray(self.label_column, dtype=np.int64)
            if self.label_column.shape != (self.n,):
                raise DatasetError("label column length must equal object count")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def cardinalities(self) -> np.ndarray:
        """Per-feature vocabulary sizes m_r."""
        return np.array([len(v) for v in self.vocab], dtype=np.int64)

    def decode_row(self, i: int) -> list[str | None]:
        """Original strings of row i; None for missing cells."""
        return [
            None if c == MISSING else self.vocab[r][c]
            for r, c in enumerate(self.values[i])
        ]


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for the well-separated synthetic generator."""

    n: int
    d: int
    k_true: int
    purity: float = 0.9
    values_per_feature: int = 5
    seed: int = 0

    def validate(self):
        if self.n < 1 or self.d < 1 or self.k_true < 1:
            raise DatasetError("n, d and k_true must be positive")
        if not (0.0 < self.purity <= 1.0):
            raise DatasetError("purity must be in (0, 1]")
        if self.k_true > self.values_per_feature:
            raise DatasetError(
                "k_true exceeds values_per_feature; clusters need distinct signature values"
            )


def load_csv(path, has_header=True, label_column_name=None, missing_token="?") -> Dataset:
    """Read a UTF-8, RFC 4180 CSV file into a Dataset.

    Cells equal to `missing_token` (after stripping surrounding whitespace)
    become the missing sentinel. The named label column, if any, is pulled
    out of the value matrix and interned separately.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        raise DatasetError(f"{path}: empty file")

    if has_header:
        header = [c.strip() for c in rows[0]]
        body = rows[1:]
    else:
        header = [f"f{j}" for j in range(len(rows[0]))]
        body = rows
    if not body:
        raise DatasetError(f"{path}: no data rows")

    width = len(header)
    for idx, row in enumerate(body):
        if len(row) != width:
            raise DatasetError(
                f"{path}: ragged row {idx + (2 if has_header else 1)}: "
                f"expected {width} cells, got {len(row)}"
            )

    label_idx = None
    if label_column_name is not None:
        if label_column_name not in header:
            raise DatasetError(f"label column {label_column_name!r} not found in header")
        label_idx = header.index(label_column_name)

    feature_idx = [j for j in range(width) if j != label_idx]
    if not feature_idx:
        raise DatasetError("no feature columns remain after removing the label column")
    feature_names = [header[j] for j in feature_idx]

    vocab: list[list[str]] = [[] for _ in feature_idx]
    interner: list[dict[str, int]] = [{} for _ in feature_idx]
    values = np.empty((len(body), len(feature_idx)), dtype=np.int32)
    for i, row in enumerate(body):
        for out_r, j in enumerate(feature_idx):
            cell = row[j].strip()
            if cell == missing_token:
                values[i, out_r] = MISSING
                continue
            code = interner[out_r].get(cell)
            if code is None:
                code = len(vocab[out_r])
                interner[out_r][cell] = code
                vocab[out_r].append(cell)
            values[i, out_r] = code

    label_column = None
    label_vocab = None
    if label_idx is not None:
        label_vocab = []
        label_map: dict[str, int] = {}
        label_column = np.empty(len(body), dtype=np.int64)
        for i, row in enumerate(body):
            cell = row[label_idx].strip()
            code = label_map.get(cell)
            if code is None:
                code = len(label_vocab)
                label_map[cell] = code
                label_vocab.append(cell)
            label_column[i] = code

    for r, words in enumerate(vocab):
        if not words:
            raise DatasetError(
                f"feature {feature_names[r]!r} has no observed values (all missing)"
            )

    return Dataset(values, vocab, feature_names, label_column, label_vocab)


def drop_missing(ds: Dataset) -> Dataset:
    """Return the dataset restricted to rows with no missing cells."""
    keep = ~(ds.values == MISSING).any(axis=1)
    if not keep.any():
        raise DatasetError("empty dataset after filtering missing values")
    labels = ds.label_column[keep] if ds.label_column is not None else None
    return Dataset(ds.values[keep], ds.vocab, ds.feature_names, labels, ds.label_vocab)


def generate_synthetic(spec: SynthSpec) -> tuple[Dataset, np.ndarray]:
    """Generate a well-separated categorical dataset with known clusters.

    Object i belongs to cluster (i mod k_true). Each cell takes its
    cluster's signature code with probability `purity` and otherwise a
    uniformly random code in [0, m). Deterministic given spec.seed.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    m = spec.values_per_feature
    truth = np.arange(spec.n, dtype=np.int64) % spec.k_true
    values = np.broadcast_to(truth[:, None], (spec.n, spec.d)).astype(np.int32)
    noise_mask = rng.random((spec.n, spec.d)) >= spec.purity
    noise = rng.integers(0, m, size=(spec.n, spec.d), dtype=np.int32)
    values = np.where(noise_mask, noise, values)
    vocab = [[f"v{t}" for t in range(m)] for _ in range(spec.d)]
    names = [f"f{r}" for r in range(spec.d)]
    ds = Dataset(values, vocab, names, label_column=truth,
                 label_vocab=[f"c{t}" for t in range(spec.k_true)])
    return ds, truth


def save_csv(ds: Dataset, path, missing_token="?"):
    """Write the dataset back to CSV using original category strings."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(ds.feature_names)
        for i in range(ds.n):
            writer.writerow(
                missing_token if c is None else c for c in ds.decode_row(i)
            )


def save_labels(labels, path):
    with open(path, "w", encoding="utf-8") as fh:
        for y in labels:
            fh.write(f"{int(y)}\n")


def load_labels(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise DatasetError(f"{path}: empty label file")
    try:
        return np.array([int(ln) for ln in lines], dtype=np.int64)
    except ValueError as exc:
        raise DatasetError(f"{path}: label files must contain one integer per line") from exc
