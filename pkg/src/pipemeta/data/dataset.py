#!/usr/bin/env python3
"""
Tabular dataset types and CSV ingestion.

A dataset on disk is a UTF-8 CSV with a header row plus an optional sidecar
``<name>.schema`` of key=value lines::

    target=class
    categorical=color,shape

Empty cells and the literal ``?`` are missing values.
"""

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import FrozenSet, List, Optional, Tuple

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from ..core.exceptions import (
    DatasetError,
    EmptyDatasetError,
    RaggedRowError,
    SingleClassError,
    UnreadableFileError,
)
from ..core.logging_utils import get_component_logger

logger = get_component_logger("data")

MISSING_SENTINELS = frozenset({"", "?"})


class ColumnKind(str, Enum):
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"


def frozen_array(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Column:
    """One feature column with a per-entry missing flag.

    Numeric columns hold float64 values (NaN where missing); categorical
    columns hold strings ("" where missing).
    """

    name: str
    kind: ColumnKind
    values: np.ndarray
    missing: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64 if self.kind is ColumnKind.NUMERIC else object)
        missing = np.asarray(self.missing, dtype=bool)
        if values.ndim != 1 or missing.shape != values.shape:
            raise DatasetError(f"column {self.name!r}: values and missing flags must be 1-D of equal length")
        if self.kind is ColumnKind.NUMERIC and not np.isfinite(values[~missing]).all():
            row = int(np.flatnonzero(~missing & ~np.isfinite(values))[0])
            raise DatasetError(f"column {self.name!r}: non-finite numeric value at row {row + 1}")
        object.__setattr__(self, "values", frozen_array(values))
        object.__setattr__(self, "missing", frozen_array(missing))

    def __len__(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_missing(self) -> int:
        return int(self.missing.sum())


@dataclass(frozen=True)
class RawDataset:
    """A classification dataset before cleaning."""

    id: str
    columns: Tuple[Column, ...]
    target: np.ndarray

    def __post_init__(self):
        target = np.asarray(self.target, dtype=object)
        object.__setattr__(self, "columns", tuple(self.columns))
        if target.ndim != 1:
            raise DatasetError(f"dataset {self.id!r}: target must be 1-dimensional")
        if target.shape[0] < 2:
            raise EmptyDatasetError(f"dataset {self.id!r}: needs at least 2 rows, got {target.shape[0]}")
        for column in self.columns:
            if len(column) != target.shape[0]:
                raise DatasetError(
                    f"dataset {self.id!r}: column {column.name!r} has {len(column)} rows, target has {target.shape[0]}"
                )
        if len(pd.unique(target)) < 2:
            raise SingleClassError(f"dataset {self.id!r}: target has a single class {target[0]!r}")
        object.__setattr__(self, "target", frozen_array(target))

    @property
    def n_rows(self) -> int:
        return int(self.target.shape[0])

    @property
    def column_names(self) -> List[str]:
        return [column.name for column in self.columns]

    def column(self, name: str) -> Column:
        for column in self.columns:
            if column.name == name:
                return column
        raise KeyError(name)

    def missing_matrix(self) -> np.ndarray:
        """Boolean (rows x columns) matrix of missing flags."""
        if not self.columns:
            return np.zeros((self.n_rows, 0), dtype=bool)
        return np.column_stack([column.missing for column in self.columns])


@dataclass(frozen=True)
class DatasetSchema:
    """Column-kind declarations read from a sidecar file."""

    target: Optional[str] = None
    categorical: FrozenSet[str] = field(default_factory=frozenset)
    numeric: FrozenSet[str] = field(default_factory=frozenset)


def _split_list(value: Optional[str]) -> FrozenSet[str]:
    if not value:
        return frozenset()
    return frozenset(item.strip() for item in value.split(",") if item.strip())


def load_schema(path: Path) -> DatasetSchema:
    """Parse a key=value schema sidecar."""
    try:
        values = dotenv_values(path)
    except OSError as e:
        raise UnreadableFileError(f"cannot read schema {path}: {e}")
    return DatasetSchema(
        target=(values.get("target") or None),
        categorical=_split_list(values.get("categorical")),
        numeric=_split_list(values.get("numeric")),
    )


def _parse_numeric(cells: pd.Series, missing: np.ndarray) -> Optional[np.ndarray]:
    """Parse cells as floats; None when any non-missing cell is not a finite number."""
    parsed = pd.to_numeric(cells.where(~missing, None), errors="coerce").to_numpy(dtype=np.float64)
    present = ~missing
    if not np.isfinite(parsed[present]).all():
        return None
    return parsed


def _check_field_counts(path: Path) -> None:
    """Reject rows whose field count differs from the header's.

    The pandas tokenizer pads short rows with empty fields, which would make them
    indistinguishable from missing cells.
    """
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle, skipinitialspace=True)
            header = next(reader, None)
            if header is None:
                raise EmptyDatasetError(f"{path}: file has no header row")
            row = 0
            for fields in reader:
                if not fields:
                    continue
                row += 1
                if len(fields) < len(header):
                    raise RaggedRowError(f"{path}: row {row} has no value for column {header[len(fields)].strip()!r}")
                if len(fields) > len(header):
                    raise RaggedRowError(f"{path}: row {row} has {len(fields)} fields, header has {len(header)}")
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise UnreadableFileError(f"{path}: {e}")


def load_csv(path: Path, schema: Optional[DatasetSchema] = None, dataset_id: Optional[str] = None) -> RawDataset:
    """Load a CSV into a RawDataset.

    Column kinds come from the schema; undeclared columns are numeric when every
    non-missing cell parses as a finite number, else categorical. Without a
    schema target the last column is the target. Rows whose target is missing
    are dropped with a warning.
    """
    path = Path(path)
    schema = schema or DatasetSchema()
    dataset_id = dataset_id or path.stem

    _check_field_counts(path)
    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise EmptyDatasetError(f"{path}: file has no header row")
    except pd.errors.ParserError as e:
        raise RaggedRowError(f"{path}: ragged row ({e})")
    except (OSError, UnicodeDecodeError) as e:
        raise UnreadableFileError(f"{path}: {e}")

    if frame.shape[0] == 0:
        raise EmptyDatasetError(f"{path}: zero data rows")

    frame.columns = [str(name).strip() for name in frame.columns]
    target_name = schema.target or frame.columns[-1]
    if target_name not in frame.columns:
        raise DatasetError(f"{path}: target column {target_name!r} not found")
    for declared in schema.categorical | schema.numeric:
        if declared not in frame.columns:
            raise DatasetError(f"{path}: schema names unknown column {declared!r}")

    cells = frame.apply(lambda series: series.str.strip())
    target_cells = cells[target_name]
    target_missing = target_cells.isin(MISSING_SENTINELS).to_numpy()
    if target_missing.any():
        logger.warning(f"{dataset_id}: dropping {int(target_missing.sum())} row(s) with a missing target")
        cells = cells.loc[~target_missing].reset_index(drop=True)
        target_cells = cells[target_name]
    if cells.shape[0] == 0:
        raise EmptyDatasetError(f"{path}: zero data rows with a target value")

    target = target_cells.to_numpy(dtype=object)
    if len(pd.unique(target)) < 2:
        raise SingleClassError(f"{path}: target column {target_name!r} has a single class {target[0]!r}")

    columns = []
    for name in cells.columns:
        if name == target_name:
            continue
        series = cells[name]
        missing = series.isin(MISSING_SENTINELS).to_numpy()
        if name in schema.categorical:
            kind = ColumnKind.CATEGORICAL
            parsed = None
        else:
            parsed = _parse_numeric(series, missing)
            if parsed is None and name in schema.numeric:
                bad = np.flatnonzero(~missing & ~np.isfinite(
                    pd.to_numeric(series.where(~missing, None), errors="coerce").to_numpy(dtype=np.float64)))
                raise DatasetError(f"{path}: column {name!r} row {int(bad[0]) + 1} is not numeric")
            kind = ColumnKind.NUMERIC if parsed is not None else ColumnKind.CATEGORICAL

        if kind is ColumnKind.NUMERIC:
            values = parsed
        else:
            values = series.where(~missing, "").to_numpy(dtype=object)
        columns.append(Column(name=name, kind=kind, values=values, missing=missing))

    n_missing = sum(column.n_missing for column in columns)
    logger.debug(f"Loaded {dataset_id}: {len(target)} rows, {len(columns)} feature columns, "
                 f"{n_missing} missing cell(s)")
    return RawDataset(id=dataset_id, columns=tuple(columns), target=target)


def discover_datasets(data_dir: Path) -> List[Tuple[str, Path, Optional[DatasetSchema]]]:
    """List (dataset_id, csv_path, schema) for every CSV in a directory, sorted by id."""
    data_dir = Path(data_dir)
    found = []
    for csv_path in sorted(data_dir.glob("*.csv")):
        schema_path = csv_path.with_suffix(".schema")
        schema = load_schema(schema_path) if schema_path.is_file() else None
        found.append((csv_path.stem, csv_path, schema))
    return found


def write_dataset(raw: RawDataset, out_dir: Path, target_name: str = "class") -> Path:
    """Write a RawDataset as CSV plus schema sidecar; returns the CSV path.

    Missing numeric cells are written empty and missing categorical cells as "?".
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    data = {}
    for column in raw.columns:
        if column.kind is ColumnKind.NUMERIC:
            text = np.array([repr(float(v)) for v in column.values], dtype=object)
            text[column.missing] = ""
        else:
            text = np.array(column.values, dtype=object)
            text[column.missing] = "?"
        data[column.name] = text
    data[target_name] = np.asarray(raw.target, dtype=object)

    csv_path = out_dir / f"{raw.id}.csv"
    pd.DataFrame(data).to_csv(csv_path, index=False)

    categorical = [column.name for column in raw.columns if column.kind is ColumnKind.CATEGORICAL]
    lines = [f"target={target_name}"]
    if categorical:
        lines.append(f"categorical={','.join(categorical)}")
    csv_path.with_suffix(".schema").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return csv_path
