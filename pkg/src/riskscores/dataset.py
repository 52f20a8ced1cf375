"""Tabular data loading, validation, threshold binarization, and CV folds."""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    ConstantColumn,
    MissingColumn,
    NonNumericFeature,
    SingleClass,
    TooFewSamples,
    UnmappableLabel,
)

DEFAULT_LABEL_MAPPING = {"0": -1, "1": 1, "-1": -1, "+1": 1}


@dataclass(frozen=True)
class Dataset:
    """Dense feature matrix with +/-1 labels.

    The intercept is never stored as a column; solvers handle it explicitly.
    Immutable after construction and safe to share across workers.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        X = np.ascontiguousarray(self.X, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise ValueError(f"inconsistent shapes X={X.shape} y={y.shape}")
        if not np.all(np.isfinite(X)):
            raise NonNumericFeature("feature matrix contains NaN/Inf entries")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise UnmappableLabel("labels must be -1 or +1")
        if np.all(y == 1.0) or np.all(y == -1.0):
            raise SingleClass("both classes must be present")
        names = tuple(self.feature_names)
        if len(names) != X.shape[1]:
            raise ValueError("feature_names length must equal number of columns")
        if len(set(names)) != len(names):
            raise ValueError("feature_names must be unique")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def n_pos(self) -> int:
        return int(np.sum(self.y == 1.0))

    @property
    def n_neg(self) -> int:
        return int(np.sum(self.y == -1.0))

    def subset(self, rows: np.ndarray) -> "Dataset":
        return Dataset(self.X[rows], self.y[rows], self.feature_names)


class BinarizationStrategy(Enum):
    ALL_UNIQUE_THRESHOLDS = "all_unique"
    QUANTILES = "quantiles"


@dataclass(frozen=True)
class BinarizationSpec:
    """Which columns to expand into indicator features and how to cut them."""

    strategy: BinarizationStrategy = BinarizationStrategy.ALL_UNIQUE_THRESHOLDS
    q: int | None = None
    columns: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strategy is BinarizationStrategy.QUANTILES:
            if self.q is None or self.q < 2:
                raise ValueError("quantile binarization requires q >= 2")


def _nearest_rank_quantile(values: np.ndarray, prob: float) -> float:
    """Nearest-rank quantile: value at index ceil(prob * n) - 1 of sorted data."""
    s = np.sort(values)
    idx = max(int(np.ceil(prob * len(s))) - 1, 0)
    return float(s[idx])


def compute_thresholds(ds: Dataset, spec: BinarizationSpec) -> dict[int, np.ndarray]:
    """Per-column cut-points. Duplicates are collapsed; constant columns map
    to an empty threshold list (and will be dropped with a warning)."""
    thresholds: dict[int, np.ndarray] = {}
    for j in spec.columns:
        col = ds.X[:, j]
        uniq = np.unique(col)
        if len(uniq) <= 1:
            thresholds[j] = np.empty(0)
            continue
        if spec.strategy is BinarizationStrategy.ALL_UNIQUE_THRESHOLDS:
            thresholds[j] = uniq
        else:
            cuts = [_nearest_rank_quantile(col, i / spec.q) for i in range(1, spec.q)]
            thresholds[j] = np.unique(np.asarray(cuts))
    return thresholds


def apply_thresholds(ds: Dataset, thresholds: dict[int, np.ndarray]) -> Dataset:
    """Replace each thresholded column with indicator columns 1[x <= theta],
    expanded in place; untouched columns are preserved in order."""
    cols: list[np.ndarray] = []
    names: list[str] = []
    for j in range(ds.p):
        if j not in thresholds:
            cols.append(ds.X[:, j])
            names.append(ds.feature_names[j])
            continue
        cuts = thresholds[j]
        if len(cuts) == 0:
            warnings.warn(
                f"column {ds.feature_names[j]!r} has <= 1 unique value; dropped",
                ConstantColumn,
            )
            continue
        for theta in cuts:
            cols.append((ds.X[:, j] <= theta).astype(np.float64))
            names.append(f"{ds.feature_names[j]}<={theta:g}")
    return Dataset(np.column_stack(cols), ds.y, tuple(names))


def binarize(ds: Dataset, spec: BinarizationSpec) -> Dataset:
    return apply_thresholds(ds, compute_thresholds(ds, spec))


@dataclass(frozen=True)
class FoldPlan:
    """Stratified cross-validation assignment, deterministic given the seed."""

    k_folds: int
    seed: int
    assignments: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(self.assignments, dtype=np.int64)
        if a.min() < 0 or a.max() >= self.k_folds:
            raise ValueError("fold indices out of range")
        a.setflags(write=False)
        object.__setattr__(self, "assignments", a)

    def train_test(self, fold: int) -> tuple[np.ndarray, np.ndarray]:
        mask = self.assignments == fold
        return np.flatnonzero(~mask), np.flatnonzero(mask)

    def to_json(self) -> str:
        return json.dumps(
            {
                "k_folds": self.k_folds,
                "seed": self.seed,
                "assignments": self.assignments.tolist(),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "FoldPlan":
        obj = json.loads(text)
        return cls(obj["k_folds"], obj["seed"], np.asarray(obj["assignments"]))


def make_folds(ds: Dataset, k_folds: int, seed: int) -> FoldPlan:
    """Stratified folds: positives and negatives are shuffled separately and
    dealt round-robin, so per-fold class counts differ from ideal by < 1."""
    if k_folds < 2:
        raise ValueError("k_folds must be >= 2")
    if ds.n < k_folds:
        raise TooFewSamples(f"n={ds.n} < k_folds={k_folds}")
    rng = np.random.default_rng(seed)
    assignments = np.empty(ds.n, dtype=np.int64)
    for cls_value in (1.0, -1.0):
        idx = np.flatnonzero(ds.y == cls_value)
        rng.shuffle(idx)
        assignments[idx] = np.arange(len(idx)) % k_folds
    return FoldPlan(k_folds, seed, assignments)


def load_csv(path, label_column: str, label_mapping: dict | None = None) -> Dataset:
    """Load an RFC-4180 CSV with a header row into a Dataset.

    ``label_mapping`` maps raw label strings to -1/+1; defaults to
    {"0": -1, "1": +1} (plus identity on "-1"/"+1").
    """
    mapping = {str(k): int(v) for k, v in (label_mapping or DEFAULT_LABEL_MAPPING).items()}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise MissingColumn("empty file: no header row")
        if label_column not in header:
            raise MissingColumn(f"label column {label_column!r} not in header")
        label_idx = header.index(label_column)
        feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)
        rows: list[list[float]] = []
        labels: list[int] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            raw = row[label_idx].strip()
            if raw not in mapping:
                raise UnmappableLabel(f"line {lineno}: label {raw!r} not in mapping")
            labels.append(mapping[raw])
            feats = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    feats.append(float(cell))
                except ValueError:
                    raise NonNumericFeature(
                        f"line {lineno}: non-numeric value {cell!r} in "
                        f"column {header[i]!r}"
                    ) from None
            rows.append(feats)
    if not rows:
        raise TooFewSamples("no data rows")
    return Dataset(np.asarray(rows, dtype=np.float64), np.asarray(labels), feature_names)
