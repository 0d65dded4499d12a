#!/usr/bin/env python3
"""
The 41-element metafeature vector.

Missing-value and raw column-kind features come from the dataset before
imputation; every other feature is computed on the cleaned training rows.
"""

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.linalg import svdvals
from scipy.stats import kurtosis, skew

from ..core.config import RunConfig
from ..core.exceptions import PipemetaError, SingleClassError
from ..core.logging_utils import get_component_logger
from ..core.seeding import derive_seed
from ..core.validation import ValidationError
from ..data import CleanDataset, ColumnKind, RawDataset, discover_datasets, load_csv
from ..runner.executor import prepare_dataset
from .landmarkers import landmark, landmark_names

logger = get_component_logger("metafeatures")

SIMPLE_NAMES = [
    "n_instances",
    "log_n_instances",
    "n_features",
    "log_n_features",
    "n_classes",
    "n_numeric_features",
    "n_categorical_features",
    "ratio_categorical_numeric",
    "ratio_numeric_categorical",
    "dimensionality",
    "log_dimensionality",
    "inverse_dimensionality",
    "log_inverse_dimensionality",
    "pct_missing_values",
    "pct_instances_with_missing",
    "pct_features_with_missing",
    "minority_class_fraction",
    "majority_class_fraction",
]

STATISTICAL_NAMES = [
    "skewness_mean",
    "skewness_std",
    "kurtosis_mean",
    "kurtosis_std",
    "mean_abs_correlation",
    "pca_first_component_variance",
    "coefficient_of_variation_mean",
    "sparsity",
]

INFORMATION_NAMES = ["normalized_class_entropy"]

LANDMARKING_NAMES = landmark_names()

METAFEATURE_NAMES = SIMPLE_NAMES + STATISTICAL_NAMES + INFORMATION_NAMES + LANDMARKING_NAMES

MAX_CORRELATION_FEATURES = 50
CV_MEAN_FLOOR = 1e-12


@dataclass(frozen=True)
class MetafeatureVector:
    """Ordered, finite metafeature values for one dataset."""

    dataset_id: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (len(METAFEATURE_NAMES),):
            raise ValidationError(
                f"{self.dataset_id}: expected {len(METAFEATURE_NAMES)} metafeatures, got {values.shape}"
            )
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise ValidationError(f"{self.dataset_id}: metafeature {METAFEATURE_NAMES[bad[0]]} is not finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, name: str) -> float:
        return float(self.values[METAFEATURE_NAMES.index(name)])

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(METAFEATURE_NAMES, self.values.tolist()))


def _simple(raw: RawDataset, rows: np.ndarray, clean_train: CleanDataset) -> Dict[str, float]:
    m, n = clean_train.n_rows, clean_train.n_features
    n_numeric = sum(1 for column in raw.columns if column.kind is ColumnKind.NUMERIC)
    n_categorical = len(raw.columns) - n_numeric
    missing = raw.missing_matrix()[rows]
    _, counts = np.unique(clean_train.y, return_counts=True)
    fractions = counts / counts.sum()

    return {
        "n_instances": m,
        "log_n_instances": np.log2(m),
        "n_features": n,
        "log_n_features": np.log2(n),
        "n_classes": counts.size,
        "n_numeric_features": n_numeric,
        "n_categorical_features": n_categorical,
        "ratio_categorical_numeric": n_categorical / n_numeric if n_numeric else 0.0,
        "ratio_numeric_categorical": n_numeric / n_categorical if n_categorical else 0.0,
        "dimensionality": n / m,
        "log_dimensionality": np.log2(n / m),
        "inverse_dimensionality": m / n,
        "log_inverse_dimensionality": np.log2(m / n),
        "pct_missing_values": float(missing.mean()) if missing.size else 0.0,
        "pct_instances_with_missing": float(missing.any(axis=1).mean()) if missing.size else 0.0,
        "pct_features_with_missing": float(missing.any(axis=0).mean()) if missing.size else 0.0,
        "minority_class_fraction": float(fractions.min()),
        "majority_class_fraction": float(fractions.max()),
    }


def _mean_abs_correlation(X: np.ndarray, seed: int) -> float:
    n = X.shape[1]
    if n < 2:
        return 0.0
    columns = np.arange(n)
    if n > MAX_CORRELATION_FEATURES:
        rng = np.random.default_rng(derive_seed(seed, "correlation-sample"))
        columns = np.sort(rng.choice(n, size=MAX_CORRELATION_FEATURES, replace=False))
    sample = X[:, columns]
    constant = np.ptp(sample, axis=0) == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.corrcoef(sample, rowvar=False)
    corr[constant, :] = 0.0
    corr[:, constant] = 0.0
    upper = np.abs(np.nan_to_num(corr[np.triu_indices(columns.size, k=1)]))
    return float(upper.mean())


def _statistical(X: np.ndarray, seed: int) -> Dict[str, float]:
    constant = np.ptp(X, axis=0) == 0
    with warnings.catch_warnings(), np.errstate(all="ignore"):
        warnings.simplefilter("ignore")
        skews = np.nan_to_num(skew(X, axis=0, bias=True))
        kurts = np.nan_to_num(kurtosis(X, axis=0, fisher=True, bias=True))
    skews[constant] = 0.0
    kurts[constant] = 0.0

    centered = X - X.mean(axis=0)
    singular = svdvals(centered)
    total = float(np.sum(singular ** 2))
    first_share = float(singular[0] ** 2 / total) if total > 0 else 0.0

    means = np.maximum(np.abs(X.mean(axis=0)), CV_MEAN_FLOOR)
    variation = X.std(axis=0) / means

    return {
        "skewness_mean": float(skews.mean()),
        "skewness_std": float(skews.std()),
        "kurtosis_mean": float(kurts.mean()),
        "kurtosis_std": float(kurts.std()),
        "mean_abs_correlation": _mean_abs_correlation(X, seed),
        "pca_first_component_variance": first_share,
        "coefficient_of_variation_mean": float(variation.mean()),
        "sparsity": float((X == 0).mean()),
    }


def _normalized_class_entropy(y: np.ndarray) -> float:
    _, counts = np.unique(y, return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum() / np.log2(counts.size))


def extract(raw: RawDataset, clean_train: CleanDataset, seed: int,
            raw_rows: Optional[Sequence[int]] = None) -> MetafeatureVector:
    """Extract the metafeature vector from a dataset's training partition.

    ``raw_rows`` selects the raw rows matching ``clean_train`` (all rows by
    default) for the missing-value features.

    Raises:
        SingleClassError: the training partition has a single class.
    """
    if clean_train.n_rows == 0:
        raise ValidationError(f"{raw.id}: training partition is empty")
    if np.unique(clean_train.y).size < 2:
        raise SingleClassError(f"{raw.id}: training partition has a single class")
    rows = np.arange(raw.n_rows) if raw_rows is None else np.asarray(raw_rows, dtype=np.int64)

    values: Dict[str, float] = {}
    values.update(_simple(raw, rows, clean_train))
    values.update(_statistical(clean_train.X, seed))
    values["normalized_class_entropy"] = _normalized_class_entropy(clean_train.y)
    with warnings.catch_warnings(), np.errstate(all="ignore"):
        warnings.simplefilter("ignore")
        values.update(landmark(clean_train.X, clean_train.y, seed))

    logger.debug(f"Extracted {len(values)} metafeatures for {raw.id}")
    return MetafeatureVector(dataset_id=raw.id, values=np.array([values[name] for name in METAFEATURE_NAMES]))


def _extract_dataset(dataset_id: str, csv_path: Path, schema, config: RunConfig, seed: int) -> Optional[MetafeatureVector]:
    try:
        raw = load_csv(csv_path, schema=schema, dataset_id=dataset_id)
        prepared = prepare_dataset(raw, config.clean_mode, config.split_ratio, seed)
        train_idx = prepared.split.train_idx
        return extract(raw, prepared.clean.subset(train_idx), derive_seed(seed, dataset_id, "metafeatures"),
                       raw_rows=train_idx)
    except PipemetaError as e:
        logger.error(f"{dataset_id}: metafeature extraction failed: {e}")
        return None


def extract_corpus(config: RunConfig) -> Dict[str, MetafeatureVector]:
    """Metafeatures for every dataset in ``config.data_dir``, on the same
    train partitions the pipeline runs use. Failing datasets are skipped."""
    seed = config.require_seed()
    if config.data_dir is None:
        raise ValidationError("metafeatures needs a data directory")
    datasets = discover_datasets(config.data_dir)
    if not datasets:
        raise ValidationError(f"no CSV datasets found in {config.data_dir}")

    vectors = Parallel(n_jobs=config.jobs)(
        delayed(_extract_dataset)(dataset_id, csv_path, schema, config, seed)
        for dataset_id, csv_path, schema in datasets
    )
    extracted = {vector.dataset_id: vector for vector in vectors if vector is not None}
    logger.info(f"Extracted metafeatures for {len(extracted)} of {len(datasets)} dataset(s)")
    return extracted


def write_metafeatures(vectors: Dict[str, MetafeatureVector], path: Path) -> None:
    rows = [[dataset_id, *vectors[dataset_id].values.tolist()] for dataset_id in sorted(vectors)]
    frame = pd.DataFrame(rows, columns=["dataset_id", *METAFEATURE_NAMES])
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")


def read_metafeatures(path: Path) -> Dict[str, MetafeatureVector]:
    try:
        frame = pd.read_csv(path, dtype={"dataset_id": str}, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"cannot read metafeatures {path}: {e}")
    expected: List[str] = ["dataset_id", *METAFEATURE_NAMES]
    if list(frame.columns) != expected:
        missing = [name for name in expected if name not in frame.columns]
        raise ValidationError(f"{path}: unexpected columns (missing: {', '.join(missing) or 'none'})")
    if frame["dataset_id"].duplicated().any():
        duplicate = frame.loc[frame["dataset_id"].duplicated(), "dataset_id"].iloc[0]
        raise ValidationError(f"{path}: duplicate dataset_id {duplicate!r}")
    return {
        row.dataset_id: MetafeatureVector(dataset_id=row.dataset_id, values=np.asarray(row[1:], dtype=np.float64))
        for row in frame.itertuples(index=False)
    }
