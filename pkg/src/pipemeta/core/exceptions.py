#!/usr/bin/env python3
"""
pipemeta - Error Taxonomy

Every failure raised by the workbench derives from PipemetaError so callers can
separate expected domain failures from programming errors.
"""


class PipemetaError(Exception):
    """Base class for all workbench errors."""
    pass


# Datasets

class DatasetError(PipemetaError):
    """A dataset could not be loaded or cleaned."""
    pass


class UnreadableFileError(DatasetError):
    pass


class EmptyDatasetError(DatasetError):
    pass


class SingleClassError(DatasetError):
    pass


class RaggedRowError(DatasetError):
    pass


class UnusableDatasetError(DatasetError):
    """Raised when cleaning leaves no usable feature column."""
    pass


class StratificationError(DatasetError):
    pass


# Transforms and learners

class TransformError(PipemetaError):
    """A preprocessor failed to fit or transform."""
    pass


class ConvergenceError(TransformError):
    pass


class DimensionMismatchError(PipemetaError):
    pass


class ResourceExhaustedError(PipemetaError):
    """An operation would exceed the configured memory budget or ran out of memory."""
    pass


class LearnerError(PipemetaError):
    pass


# Analysis

class ZeroBaselineTimeError(PipemetaError):
    """Relative runtime is undefined when the baseline took zero seconds."""
    pass


class SimulationError(PipemetaError):
    pass
