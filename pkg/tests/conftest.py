"""Shared fixtures for the pipemeta test suite."""

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
import pytest

from src.pipemeta.core.logging_utils import COMPONENT_LOG_FILES, close_logging
from src.pipemeta.learners import ClassifierKind
from src.pipemeta.runner import ExperimentRecord, PipelineSpec, RecordStatus, ResultsStore
from src.pipemeta.transforms import PreprocessorKind

# (train_time_s, test_time_s, train_acc, test_acc); None marks a failed pipeline
Outcome = Optional[Tuple[float, float, float, float]]


def build_record(dataset_id: str, preproc, clf, outcome: Outcome, seed: int = 0,
                 status: RecordStatus = RecordStatus.OTHER_ERROR) -> ExperimentRecord:
    spec = PipelineSpec(dataset_id=dataset_id, preproc=PreprocessorKind.parse(preproc),
                        clf=ClassifierKind.parse(clf), seed=seed)
    if outcome is None:
        return ExperimentRecord(spec=spec, status=status, train_time_s=0.0, test_time_s=0.0, out_dim=0,
                                error_detail="TransformError: injected")
    train_time, test_time, train_acc, test_acc = outcome
    return ExperimentRecord(spec=spec, status=RecordStatus.OK, train_time_s=train_time, test_time_s=test_time,
                            train_acc=train_acc, test_acc=test_acc, out_dim=1)


@pytest.fixture
def make_record():
    return build_record


@pytest.fixture
def make_store():
    """Build a ResultsStore from {(dataset_id, preproc, clf): outcome}."""

    def _make(outcomes: Dict[Tuple[str, str, str], Outcome]) -> ResultsStore:
        return ResultsStore(build_record(d, p, c, outcome) for (d, p, c), outcome in outcomes.items())

    return _make


@pytest.fixture
def full_store():
    """Every (dataset, preproc, clf) cell from a test-accuracy function of (dataset, preproc, clf)."""

    def _make(dataset_ids, test_acc, train_time=1.0, test_time=1.0) -> ResultsStore:
        records = []
        for dataset_id in dataset_ids:
            for preproc in PreprocessorKind:
                for clf in ClassifierKind:
                    acc = test_acc(dataset_id, preproc, clf)
                    outcome = None if acc is None else (train_time, test_time, acc, acc)
                    records.append(build_record(dataset_id, preproc, clf, outcome))
        return ResultsStore(records)

    return _make


@pytest.fixture
def write_csv(tmp_path):
    """Write text to a CSV (and optional schema sidecar) under tmp_path."""

    def _write(name: str, text: str, schema: Optional[str] = None) -> Path:
        path = tmp_path / f"{name}.csv"
        path.write_text(text, encoding="utf-8")
        if schema is not None:
            path.with_suffix(".schema").write_text(schema, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture(autouse=True)
def _release_log_handlers():
    yield
    logging.getLogger("pipemeta").handlers.clear()
    close_logging()
    logging.getLogger("pipemeta").setLevel(logging.NOTSET)
    logging.getLogger("pipemeta").propagate = True
    for component in COMPONENT_LOG_FILES:
        logging.getLogger(f"pipemeta.{component}").setLevel(logging.NOTSET)
