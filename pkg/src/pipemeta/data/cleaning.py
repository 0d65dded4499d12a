#!/usr/bin/env python3
"""
Fixed cleaning stage: random-draw imputation, one-hot encoding and the
stratified train/test split.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.preprocessing import OneHotEncoder

from ..core.exceptions import DatasetError, StratificationError, UnusableDatasetError
from ..core.logging_utils import get_component_logger
from ..core.validation import ValidationError, validate_ratio_param
from .dataset import Column, ColumnKind, RawDataset, frozen_array

logger = get_component_logger("data")

# Guards floor(ratio * n) against products such as 0.29 * 100 = 28.999999999999996
_FLOOR_EPSILON = 1e-9


@dataclass(frozen=True)
class CleanDataset:
    """Dense, fully numeric dataset ready for the preprocessors."""

    id: str
    X: np.ndarray
    y: np.ndarray
    feature_names: Tuple[str, ...]

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] < 1:
            raise DatasetError(f"dataset {self.id!r}: clean matrix needs at least one column")
        if X.shape[0] != y.shape[0]:
            raise DatasetError(f"dataset {self.id!r}: X has {X.shape[0]} rows, y has {y.shape[0]}")
        if not np.isfinite(X).all():
            raise DatasetError(f"dataset {self.id!r}: clean matrix has non-finite entries")
        if len(self.feature_names) != X.shape[1]:
            raise DatasetError(f"dataset {self.id!r}: {len(self.feature_names)} names for {X.shape[1]} columns")
        object.__setattr__(self, "X", frozen_array(X))
        object.__setattr__(self, "y", frozen_array(y))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    def subset(self, rows: Sequence[int]) -> "CleanDataset":
        """Restrict to the given rows (e.g. the training partition)."""
        rows = np.asarray(rows, dtype=np.int64)
        return CleanDataset(id=self.id, X=self.X[rows], y=self.y[rows], feature_names=self.feature_names)


@dataclass(frozen=True)
class TaskSplit:
    train_idx: np.ndarray
    test_idx: np.ndarray
    seed: int

    def __post_init__(self):
        train = np.asarray(self.train_idx, dtype=np.int64)
        test = np.asarray(self.test_idx, dtype=np.int64)
        if np.intersect1d(train, test).size:
            raise StratificationError("train and test partitions overlap")
        object.__setattr__(self, "train_idx", frozen_array(train))
        object.__setattr__(self, "test_idx", frozen_array(test))

    @property
    def n_rows(self) -> int:
        return int(self.train_idx.size + self.test_idx.size)


@dataclass(frozen=True)
class _EncodedColumn:
    name: str
    kind: ColumnKind
    encoder: Optional[OneHotEncoder]
    categories: Tuple[str, ...]


@dataclass(frozen=True)
class Encoder:
    """Maps raw rows into the feature space fitted by one_hot_encode.

    Categories unseen at fit time encode as zeros across that column's
    indicators.
    """

    columns: Tuple[_EncodedColumn, ...]
    feature_names: Tuple[str, ...]
    class_labels: Tuple[object, ...]

    def transform(self, raw: RawDataset, rows: Optional[Sequence[int]] = None) -> np.ndarray:
        if any(column.missing.any() for column in raw.columns):
            raise ValidationError(f"dataset {raw.id!r}: encoding requires imputed data")
        selected = np.arange(raw.n_rows) if rows is None else np.asarray(rows, dtype=np.int64)
        blocks = []
        for spec in self.columns:
            try:
                column = raw.column(spec.name)
            except KeyError:
                raise DatasetError(f"dataset {raw.id!r}: encoded column {spec.name!r} is missing")
            values = column.values[selected]
            if spec.kind is ColumnKind.NUMERIC:
                blocks.append(np.asarray(values, dtype=np.float64).reshape(-1, 1))
            else:
                blocks.append(spec.encoder.transform(np.asarray(values, dtype=object).reshape(-1, 1)))
        return np.hstack(blocks) if blocks else np.zeros((selected.size, 0))

    def encode_target(self, target: Sequence) -> np.ndarray:
        index: Dict[object, int] = {label: i for i, label in enumerate(self.class_labels)}
        codes = np.empty(len(target), dtype=np.int64)
        for row, label in enumerate(target):
            if label not in index:
                raise DatasetError(f"row {row + 1}: class label {label!r} was not seen when fitting the encoder")
            codes[row] = index[label]
        return codes


def impute(raw: RawDataset, seed: int, fit_rows: Optional[Sequence[int]] = None) -> RawDataset:
    """Replace each missing cell by a uniform draw from its column's known values.

    Draws come from the non-missing multiset of ``fit_rows`` (all rows by
    default), so frequent values are proportionally more likely. Columns with
    no known value among ``fit_rows`` are dropped.
    """
    support_rows = np.ones(raw.n_rows, dtype=bool)
    if fit_rows is not None:
        support_rows = np.zeros(raw.n_rows, dtype=bool)
        support_rows[np.asarray(fit_rows, dtype=np.int64)] = True

    kept = []
    for position, column in enumerate(raw.columns):
        support_mask = support_rows & ~column.missing
        if not support_mask.any():
            logger.warning(f"{raw.id}: dropping column {column.name!r} with no known values")
            continue
        if not column.missing.any():
            kept.append(column)
            continue

        # One stream per column so dropping a column never shifts another column's draws
        rng = np.random.default_rng([seed, position])
        support = column.values[support_mask]
        missing_rows = np.flatnonzero(column.missing)
        values = np.array(column.values, copy=True)
        values[missing_rows] = support[rng.integers(0, support.size, size=missing_rows.size)]
        kept.append(Column(name=column.name, kind=column.kind, values=values,
                           missing=np.zeros(raw.n_rows, dtype=bool)))

    if not kept:
        raise UnusableDatasetError(f"dataset {raw.id!r}: every column is entirely missing")
    return RawDataset(id=raw.id, columns=tuple(kept), target=raw.target)


def one_hot_encode(raw: RawDataset, fit_rows: Optional[Sequence[int]] = None) -> Tuple[CleanDataset, Encoder]:
    """Expand categorical columns into indicators and map labels to 0..C-1.

    Indicator columns and class codes follow first appearance within
    ``fit_rows`` (all rows by default). Numeric columns pass through unchanged.
    """
    if any(column.missing.any() for column in raw.columns):
        raise ValidationError(f"dataset {raw.id!r}: one_hot_encode requires imputed data")
    rows = np.arange(raw.n_rows) if fit_rows is None else np.asarray(fit_rows, dtype=np.int64)

    specs = []
    feature_names = []
    for column in raw.columns:
        if column.kind is ColumnKind.NUMERIC:
            specs.append(_EncodedColumn(column.name, column.kind, None, ()))
            feature_names.append(column.name)
            continue
        categories = tuple(pd.unique(column.values[rows]))
        encoder = OneHotEncoder(
            categories=[list(categories)],
            handle_unknown="ignore",
            sparse_output=False,
            dtype=np.float64,
        )
        encoder.fit(np.asarray(categories, dtype=object).reshape(-1, 1))
        specs.append(_EncodedColumn(column.name, column.kind, encoder, categories))
        feature_names.extend(f"{column.name}={category}" for category in categories)

    class_labels = tuple(pd.unique(raw.target[rows]))
    encoder = Encoder(columns=tuple(specs), feature_names=tuple(feature_names), class_labels=class_labels)
    clean = CleanDataset(
        id=raw.id,
        X=encoder.transform(raw),
        y=encoder.encode_target(raw.target),
        feature_names=encoder.feature_names,
    )
    return clean, encoder


def stratified_indices(labels: Sequence, ratio: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Per class, floor(ratio * n_class) shuffled rows go to train, the rest to test.

    A class that would get no training row moves one row from test to train.
    Classes are visited in order of first appearance, so raw labels and their
    integer codes give the same partition for a seed.
    """
    ratio = validate_ratio_param(ratio, "ratio")
    labels = np.asarray(labels)
    classes, first_seen, inverse, counts = np.unique(
        labels, return_index=True, return_inverse=True, return_counts=True
    )
    inverse = inverse.reshape(-1)
    too_small = np.flatnonzero(counts < 2)
    if too_small.size:
        label = classes[too_small[0]]
        raise StratificationError(f"class {label!r} has {counts[too_small[0]]} row(s); stratification needs 2")

    rng = np.random.default_rng(seed)
    train, test = [], []
    for class_index in np.argsort(first_seen, kind="stable"):
        members = np.flatnonzero(inverse == class_index)
        members = members[rng.permutation(members.size)]
        n_train = int(np.floor(ratio * members.size + _FLOOR_EPSILON))
        n_train = max(n_train, 1)
        train.append(members[:n_train])
        test.append(members[n_train:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def split(clean: CleanDataset, ratio: float = 0.7, seed: int = 0) -> TaskSplit:
    """Stratified, seeded train/test split of a clean dataset."""
    train_idx, test_idx = stratified_indices(clean.y, ratio, seed)
    return TaskSplit(train_idx=train_idx, test_idx=test_idx, seed=seed)
