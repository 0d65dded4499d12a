"""
Metalearning Module

Metadataset construction and the random-forest metamodels.
"""

from .metadataset import (
    MetaInstance,
    build_metadataset,
    feature_matrix,
    feature_names,
    label_vector,
    predictive_features,
    read_metadataset,
    write_metadataset,
)
from .metamodel import (
    POOLED,
    MetaEvaluation,
    Metamodel,
    evaluate_by_dataset_split,
    evaluate_metamodel,
    model_for,
    split_datasets,
    train_metamodel,
    train_metamodels,
)

__all__ = [
    "MetaInstance",
    "build_metadataset",
    "feature_matrix",
    "feature_names",
    "label_vector",
    "predictive_features",
    "read_metadataset",
    "write_metadataset",
    "POOLED",
    "Metamodel",
    "MetaEvaluation",
    "train_metamodel",
    "train_metamodels",
    "model_for",
    "evaluate_metamodel",
    "evaluate_by_dataset_split",
    "split_datasets",
]
