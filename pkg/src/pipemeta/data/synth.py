"""
Bundled synthetic dataset generators.

Three families stand in for a benchmark corpus at desk scale: Gaussian blobs,
an XOR-style nonlinear task, and a mixed categorical/numeric task with a
configurable missing rate.
"""

from pathlib import Path
from typing import List

import numpy as np
from sklearn.datasets import make_blobs, make_classification

from ..core.seeding import derive_seed
from ..core.validation import ValidationError, validate_integer_param
from .dataset import Column, ColumnKind, RawDataset, write_dataset

SYNTH_KINDS = ("blobs", "xor", "mixed")

_LETTERS = np.array(list("abcdefgh"), dtype=object)


def _numeric_columns(X: np.ndarray, prefix: str = "x") -> List[Column]:
    return [
        Column(name=f"{prefix}{j}", kind=ColumnKind.NUMERIC, values=X[:, j], missing=np.zeros(X.shape[0], dtype=bool))
        for j in range(X.shape[1])
    ]


def _class_names(codes: np.ndarray) -> np.ndarray:
    return np.array([f"c{int(code)}" for code in codes], dtype=object)


def _inject_missing(columns: List[Column], rate: float, rng: np.random.Generator) -> List[Column]:
    if rate <= 0:
        return columns
    damaged = []
    for column in columns:
        missing = rng.random(len(column)) < rate
        values = np.array(column.values, copy=True)
        values[missing] = np.nan if column.kind is ColumnKind.NUMERIC else ""
        damaged.append(Column(name=column.name, kind=column.kind, values=values, missing=missing))
    return damaged


def synthesize(kind: str, dataset_id: str, n_rows: int, n_features: int, seed: int,
               missing_rate: float = 0.0, n_classes: int = 2) -> RawDataset:
    """Generate one synthetic RawDataset of the given family."""
    n_rows = validate_integer_param(n_rows, "n_rows", min_value=10)
    n_features = validate_integer_param(n_features, "n_features", min_value=2)
    if not 0.0 <= missing_rate < 1.0:
        raise ValidationError(f"missing_rate must be in [0, 1), got {missing_rate}")
    rng = np.random.default_rng(seed)

    if kind == "blobs":
        X, codes = make_blobs(n_samples=n_rows, n_features=n_features, centers=n_classes,
                              cluster_std=2.0, random_state=seed)
        columns = _numeric_columns(X)
    elif kind == "xor":
        X = rng.uniform(-1.0, 1.0, size=(n_rows, n_features))
        codes = (X[:, 0] * X[:, 1] > 0).astype(int)
        flip = rng.random(n_rows) < 0.05
        codes[flip] = 1 - codes[flip]
        X[:, 2:] *= rng.uniform(0.5, 20.0, size=n_features - 2)
        columns = _numeric_columns(X)
    elif kind == "mixed":
        n_numeric = max(1, n_features // 2)
        n_categorical = max(1, n_features - n_numeric)
        X, codes = make_classification(
            n_samples=n_rows,
            n_features=n_numeric + n_categorical,
            n_informative=min(n_numeric + n_categorical, 3),
            n_redundant=0,
            n_classes=n_classes,
            n_clusters_per_class=1,
            random_state=seed,
        )
        columns = _numeric_columns(X[:, :n_numeric] * 10.0 + 50.0)
        for j in range(n_categorical):
            source = X[:, n_numeric + j]
            n_levels = 2 + j % 4
            edges = np.quantile(source, np.linspace(0, 1, n_levels + 1)[1:-1])
            levels = _LETTERS[np.searchsorted(edges, source)]
            columns.append(Column(name=f"cat{j}", kind=ColumnKind.CATEGORICAL, values=levels,
                                  missing=np.zeros(n_rows, dtype=bool)))
    else:
        raise ValidationError(f"unknown synthetic kind {kind!r}; choose from {', '.join(SYNTH_KINDS)}")

    columns = _inject_missing(columns, missing_rate, rng)
    return RawDataset(id=dataset_id, columns=tuple(columns), target=_class_names(codes))


def synthesize_corpus(n_datasets: int, seed: int, missing_rate: float = 0.05) -> List[RawDataset]:
    """A varied corpus cycling through the families with different shapes."""
    n_datasets = validate_integer_param(n_datasets, "n", min_value=1)
    corpus = []
    for i in range(n_datasets):
        kind = SYNTH_KINDS[i % len(SYNTH_KINDS)]
        dataset_seed = derive_seed(seed, "synth", i)
        shape_rng = np.random.default_rng(dataset_seed)
        n_rows = int(shape_rng.integers(60, 201))
        n_features = int(shape_rng.integers(3, 13))
        n_classes = 2 if kind == "xor" else int(shape_rng.integers(2, 4))
        corpus.append(synthesize(
            kind,
            dataset_id=f"synth_{i:02d}_{kind}",
            n_rows=n_rows,
            n_features=n_features,
            seed=dataset_seed,
            missing_rate=missing_rate if kind == "mixed" else 0.0,
            n_classes=n_classes,
        ))
    return corpus


def write_corpus(n_datasets: int, out_dir: Path, seed: int, missing_rate: float = 0.05) -> List[Path]:
    """Synthesize a corpus and write each dataset as CSV plus schema sidecar."""
    return [write_dataset(raw, out_dir) for raw in synthesize_corpus(n_datasets, seed, missing_rate)]
