#!/usr/bin/env python3
"""
Pipeline enumeration and execution.

Datasets are cleaned and split once in the parent process; pipelines then run
on a joblib worker pool and every finished record is handed back to the parent,
the only writer of the results file.
"""

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from ..core.config import RunConfig
from ..core.exceptions import ConvergenceError, PipemetaError, ResourceExhaustedError
from ..core.logging_utils import get_component_logger
from ..core.seeding import derive_seed
from ..core.validation import ValidationError, validate_enum_param, validate_ratio_param
from ..data import CleanDataset, RawDataset, TaskSplit, discover_datasets, impute, load_csv, one_hot_encode
from ..data.cleaning import stratified_indices
from ..data.dataset import DatasetSchema
from ..learners import ClassifierKind, accuracy, predict, train
from ..transforms import PreprocessorKind, TransformSettings, expected_out_dim, fit_transform, transform
from .records import ExperimentRecord, PipelineSpec, RecordStatus, ResultsStore, append_record

logger = get_component_logger("runner")

CLEAN_MODES = ("pre-split", "post-split")


@dataclass(frozen=True)
class PreparedDataset:
    clean: CleanDataset
    split: TaskSplit

    @property
    def id(self) -> str:
        return self.clean.id


def enumerate_pipelines(dataset_ids: Sequence[str], seed: int) -> List[PipelineSpec]:
    """Every (dataset, preproc, clf) triple, ordered dataset-major.

    All 54 specs of a dataset share one derived seed, so a pipeline and its
    baseline train their classifier from the same stream.
    """
    if not dataset_ids:
        raise ValidationError("enumerate_pipelines needs at least one dataset id")
    if len(set(dataset_ids)) != len(dataset_ids):
        raise ValidationError("dataset ids must be unique")
    specs = []
    for dataset_id in dataset_ids:
        dataset_seed = derive_seed(seed, dataset_id)
        for preproc in PreprocessorKind:
            for clf in ClassifierKind:
                specs.append(PipelineSpec(dataset_id=dataset_id, preproc=preproc, clf=clf, seed=dataset_seed))
    return specs


def prepare_dataset(raw: RawDataset, clean_mode: str, ratio: float, seed: int) -> PreparedDataset:
    """Impute, encode and split one dataset.

    ``pre-split`` fits imputation and encoding on every row before splitting;
    ``post-split`` fits them on the training rows only. Both modes draw the
    same partition for a given seed.
    """
    clean_mode = validate_enum_param(clean_mode, CLEAN_MODES, "clean_mode")
    ratio = validate_ratio_param(ratio, "ratio")
    impute_seed = derive_seed(seed, raw.id, "impute")
    split_seed = derive_seed(seed, raw.id, "split")

    train_idx, test_idx = stratified_indices(raw.target, ratio, split_seed)
    fit_rows = None if clean_mode == "pre-split" else train_idx
    imputed = impute(raw, impute_seed, fit_rows=fit_rows)
    clean, _ = one_hot_encode(imputed, fit_rows=fit_rows)
    return PreparedDataset(clean=clean, split=TaskSplit(train_idx=train_idx, test_idx=test_idx, seed=split_seed))


def load_prepared(csv_path: Path, schema: Optional[DatasetSchema], clean_mode: str, ratio: float,
                  seed: int, dataset_id: Optional[str] = None) -> PreparedDataset:
    raw = load_csv(csv_path, schema=schema, dataset_id=dataset_id)
    return prepare_dataset(raw, clean_mode, ratio, seed)


def _status_for(error: Exception) -> RecordStatus:
    if isinstance(error, ConvergenceError):
        return RecordStatus.CONVERGENCE_ERROR
    if isinstance(error, (ResourceExhaustedError, MemoryError)):
        return RecordStatus.RESOURCE_ERROR
    return RecordStatus.OTHER_ERROR


def failure_record(spec: PipelineSpec, error: Exception, out_dim: int = 0,
                   train_time: float = 0.0, test_time: float = 0.0) -> ExperimentRecord:
    return ExperimentRecord(
        spec=spec,
        status=_status_for(error),
        train_time_s=train_time,
        test_time_s=test_time,
        out_dim=out_dim,
        error_detail=f"{type(error).__name__}: {error}",
    )


def run_pipeline(spec: PipelineSpec, clean: CleanDataset, split: TaskSplit,
                 settings: Optional[TransformSettings] = None) -> ExperimentRecord:
    """Run one pipeline and time it; failures come back as records, never raised."""
    X_train, y_train = clean.X[split.train_idx], clean.y[split.train_idx]
    X_test, y_test = clean.X[split.test_idx], clean.y[split.test_idx]
    out_dim = expected_out_dim(spec.preproc, X_train.shape[1], X_train.shape[0], settings or TransformSettings())
    transform_seed = derive_seed(spec.seed, "transform", spec.preproc.value)
    classifier_seed = derive_seed(spec.seed, "classifier", spec.clf.value)

    train_time = test_time = 0.0
    in_training = True
    started = time.perf_counter()
    try:
        if spec.is_baseline:
            fitted, Z_train = None, X_train
        else:
            fitted, Z_train = fit_transform(spec.preproc, X_train, y_train, transform_seed, settings)
        model = train(spec.clf, Z_train, y_train, classifier_seed)
        train_time = time.perf_counter() - started
        in_training = False

        started = time.perf_counter()
        Z_test = X_test if fitted is None else transform(fitted, X_test)
        test_pred = predict(model, Z_test)
        test_time = time.perf_counter() - started

        train_acc = accuracy(predict(model, Z_train), y_train)
        test_acc = accuracy(test_pred, y_test)
    except Exception as e:
        elapsed = time.perf_counter() - started
        if in_training:
            train_time = elapsed
        else:
            test_time = elapsed
        logger.warning(f"{spec.dataset_id} {spec.preproc.value}+{spec.clf.value} failed: {type(e).__name__}: {e}")
        return failure_record(spec, e, out_dim, train_time, test_time)

    return ExperimentRecord(
        spec=spec,
        status=RecordStatus.OK,
        train_time_s=train_time,
        test_time_s=test_time,
        train_acc=train_acc,
        test_acc=test_acc,
        out_dim=out_dim if fitted is None else fitted.out_dim,
    )


def _transform_settings(config: RunConfig) -> TransformSettings:
    return TransformSettings(
        ica_max_iter=config.ica_max_iter,
        ica_tol=config.ica_tol,
        max_matrix_bytes=config.max_matrix_bytes,
    )


def _pending_work(datasets, pending: Dict[str, List[PipelineSpec]], config: RunConfig,
                  seed: int) -> Tuple[List[ExperimentRecord], List[Tuple[PipelineSpec, PreparedDataset]]]:
    failed, runnable = [], []
    for dataset_id, csv_path, schema in datasets:
        specs = pending.get(dataset_id)
        if not specs:
            continue
        try:
            prepared = load_prepared(csv_path, schema, config.clean_mode, config.split_ratio, seed, dataset_id)
        except PipemetaError as e:
            logger.error(f"{dataset_id}: cannot prepare dataset: {e}")
            failed.extend(failure_record(spec, e) for spec in specs)
            continue
        logger.info(f"{dataset_id}: {prepared.clean.n_rows} rows, {prepared.clean.n_features} features, "
                    f"{len(specs)} pipeline(s) to run")
        runnable.extend((spec, prepared) for spec in specs)
    return failed, runnable


def run_experiments(config: RunConfig, out_path: Path) -> ResultsStore:
    """Run every pipeline for every dataset in ``config.data_dir``.

    Keys already present in ``out_path`` are skipped. New records are appended
    one line at a time as they finish; the file is finally rewritten in
    canonical order.
    """
    seed = config.require_seed()
    if config.data_dir is None:
        raise ValidationError("run needs a data directory")
    datasets = discover_datasets(config.data_dir)
    if not datasets:
        raise ValidationError(f"no CSV datasets found in {config.data_dir}")

    out_path = Path(out_path)
    store = ResultsStore.load(out_path, drop_truncated_tail=True) if out_path.exists() else ResultsStore()

    specs = enumerate_pipelines([dataset_id for dataset_id, _, _ in datasets], seed)
    pending: Dict[str, List[PipelineSpec]] = {}
    for spec in specs:
        stored = store.get(spec.key)
        if stored is None:
            pending.setdefault(spec.dataset_id, []).append(spec)
        elif stored.spec.seed != spec.seed:
            raise ValidationError(
                f"{out_path} holds ({spec.dataset_id}, {spec.preproc.value}, {spec.clf.value}) with seed "
                f"{stored.spec.seed}, but run seed {seed} gives {spec.seed}; use a new --out to change seeds"
            )
    store.save(out_path)
    n_pending = sum(len(v) for v in pending.values())
    logger.info(f"{len(specs)} pipelines over {len(datasets)} dataset(s); "
                f"{len(specs) - n_pending} already recorded, {n_pending} to run on {config.jobs} worker(s)")

    failed, runnable = _pending_work(datasets, pending, config, seed)
    settings = _transform_settings(config)

    with out_path.open("a", encoding="utf-8") as handle:
        for record in failed:
            store.append(record)
            append_record(handle, record)

        finished = Parallel(n_jobs=config.jobs, return_as="generator")(
            delayed(run_pipeline)(spec, prepared.clean, prepared.split, settings)
            for spec, prepared in runnable
        )
        for count, record in enumerate(_checked(finished, runnable), start=1):
            store.append(record)
            append_record(handle, record)
            if count % 100 == 0:
                logger.info(f"{count}/{len(runnable)} pipelines finished")

    store.save(out_path)
    n_failed = sum(1 for record in store if not record.ok)
    logger.info(f"Wrote {len(store)} records to {out_path} ({n_failed} failed)")
    return store


def _checked(finished: Iterator[ExperimentRecord], runnable) -> Iterator[ExperimentRecord]:
    for record, (spec, _) in zip(finished, runnable):
        if record.key != spec.key:
            raise PipemetaError(f"worker returned {record.key} for {spec.key}")
        yield record
