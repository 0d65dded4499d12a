"""
Dataset Module

Tabular dataset types, CSV ingestion, the fixed cleaning stage and the bundled
synthetic generators.
"""

from .cleaning import (
    CleanDataset,
    Encoder,
    TaskSplit,
    impute,
    one_hot_encode,
    split,
    stratified_indices,
)
from .dataset import (
    Column,
    ColumnKind,
    DatasetSchema,
    RawDataset,
    discover_datasets,
    load_csv,
    load_schema,
    write_dataset,
)
from .synth import SYNTH_KINDS, synthesize, synthesize_corpus, write_corpus

__all__ = [
    "Column",
    "ColumnKind",
    "DatasetSchema",
    "RawDataset",
    "CleanDataset",
    "Encoder",
    "TaskSplit",
    "load_csv",
    "load_schema",
    "discover_datasets",
    "write_dataset",
    "impute",
    "one_hot_encode",
    "split",
    "stratified_indices",
    "SYNTH_KINDS",
    "synthesize",
    "synthesize_corpus",
    "write_corpus",
]
