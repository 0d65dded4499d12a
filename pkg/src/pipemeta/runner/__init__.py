"""
Pipeline Runner Module

Enumerates and executes pipelines, persists experiment records and computes
the baseline comparisons.
"""

from .analytics import (
    ImprovementCounts,
    RuntimeHistogram,
    RuntimeSummary,
    accuracy_deltas,
    improvement_counts,
    paired_frame,
    relative_runtime,
    runtime_histogram,
    runtime_summary,
    top_pipeline_usage,
    tradeoff_quartiles,
)
from .executor import (
    PreparedDataset,
    enumerate_pipelines,
    load_prepared,
    prepare_dataset,
    run_experiments,
    run_pipeline,
)
from .records import RECORD_FIELDS, ExperimentRecord, PipelineSpec, RecordStatus, ResultsStore

__all__ = [
    "RECORD_FIELDS",
    "PipelineSpec",
    "ExperimentRecord",
    "RecordStatus",
    "ResultsStore",
    "PreparedDataset",
    "enumerate_pipelines",
    "prepare_dataset",
    "load_prepared",
    "run_pipeline",
    "run_experiments",
    "relative_runtime",
    "paired_frame",
    "improvement_counts",
    "ImprovementCounts",
    "accuracy_deltas",
    "runtime_histogram",
    "RuntimeHistogram",
    "runtime_summary",
    "RuntimeSummary",
    "top_pipeline_usage",
    "tradeoff_quartiles",
]
