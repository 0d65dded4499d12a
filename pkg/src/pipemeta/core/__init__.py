#!/usr/bin/env python3
"""
pipemeta - Core Module

Configuration, logging, validation, seeding and the error taxonomy.
"""

from .config import PipemetaConfig, RunConfig, load_config_file
from .exceptions import (
    ConvergenceError,
    DatasetError,
    DimensionMismatchError,
    EmptyDatasetError,
    LearnerError,
    PipemetaError,
    RaggedRowError,
    ResourceExhaustedError,
    SimulationError,
    SingleClassError,
    StratificationError,
    TransformError,
    UnreadableFileError,
    UnusableDatasetError,
    ZeroBaselineTimeError,
)
from .logging_utils import get_component_logger, setup_logging
from .seeding import derive_seed
from .validation import ValidationError

__all__ = [
    "PipemetaConfig",
    "RunConfig",
    "load_config_file",
    "get_component_logger",
    "setup_logging",
    "derive_seed",
    "ValidationError",
    "PipemetaError",
    "DatasetError",
    "UnreadableFileError",
    "EmptyDatasetError",
    "SingleClassError",
    "RaggedRowError",
    "UnusableDatasetError",
    "StratificationError",
    "TransformError",
    "ConvergenceError",
    "DimensionMismatchError",
    "ResourceExhaustedError",
    "LearnerError",
    "ZeroBaselineTimeError",
    "SimulationError",
]
