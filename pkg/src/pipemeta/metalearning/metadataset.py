#!/usr/bin/env python3
"""
The metadataset: one instance per ok (dataset, classifier, preprocessor)
pipeline whose baseline is also ok, labelled 1 when the pipeline's test
accuracy matches or beats the baseline.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from ..core.logging_utils import get_component_logger
from ..core.validation import ValidationError, validate_enum_param
from ..learners import ClassifierKind
from ..metafeatures import METAFEATURE_NAMES, MetafeatureVector
from ..runner import ResultsStore
from ..runner.analytics import CLASSIFIERS, COMPARATORS, PREPROCESSORS
from ..transforms import PreprocessorKind

logger = get_component_logger("metalearning")

PREPROC_FEATURES = [f"preproc_{kind.value}" for kind in PREPROCESSORS]
CLASSIFIER_FEATURES = [f"clf_{kind.value}" for kind in CLASSIFIERS]


def feature_names(pooled: bool = False) -> List[str]:
    names = METAFEATURE_NAMES + PREPROC_FEATURES
    return names + CLASSIFIER_FEATURES if pooled else names


def preproc_onehot(preproc: PreprocessorKind) -> np.ndarray:
    onehot = np.zeros(len(PREPROCESSORS))
    onehot[PREPROCESSORS.index(PreprocessorKind.parse(preproc))] = 1.0
    return onehot


def classifier_onehot(clf: ClassifierKind) -> np.ndarray:
    onehot = np.zeros(len(CLASSIFIERS))
    onehot[CLASSIFIERS.index(ClassifierKind.parse(clf))] = 1.0
    return onehot


def predictive_features(metafeatures: np.ndarray, preproc: PreprocessorKind, clf: ClassifierKind,
                        pooled: bool = False) -> np.ndarray:
    parts = [np.asarray(metafeatures, dtype=np.float64), preproc_onehot(preproc)]
    if pooled:
        parts.append(classifier_onehot(clf))
    return np.concatenate(parts)


@dataclass(frozen=True)
class MetaInstance:
    dataset_id: str
    clf: ClassifierKind
    preproc: PreprocessorKind
    metafeatures: np.ndarray
    label: int

    def __post_init__(self):
        if self.preproc is PreprocessorKind.NONE:
            raise ValidationError(f"{self.dataset_id}: the baseline is not a metadataset option")
        if self.label not in (0, 1):
            raise ValidationError(f"{self.dataset_id}: label must be 0 or 1, got {self.label}")
        if len(self.metafeatures) != len(METAFEATURE_NAMES):
            raise ValidationError(f"{self.dataset_id}: expected {len(METAFEATURE_NAMES)} metafeatures")

    def features(self, pooled: bool = False) -> np.ndarray:
        return predictive_features(self.metafeatures, self.preproc, self.clf, pooled)


def feature_matrix(instances: List[MetaInstance], pooled: bool = False) -> np.ndarray:
    if not instances:
        return np.zeros((0, len(feature_names(pooled))))
    return np.vstack([instance.features(pooled) for instance in instances])


def label_vector(instances: List[MetaInstance]) -> np.ndarray:
    return np.array([instance.label for instance in instances], dtype=np.int64)


def build_metadataset(store: ResultsStore, mf: Dict[str, MetafeatureVector],
                      comparator: str = ">=") -> List[MetaInstance]:
    """Label each ok pipeline by whether it matched (``>=``) or beat (``>``) its baseline."""
    comparator = validate_enum_param(comparator, COMPARATORS, "comparator")
    instances = []
    missing = set()
    for record, baseline in store.ok_pairs():
        dataset_id = record.spec.dataset_id
        vector = mf.get(dataset_id)
        if vector is None:
            missing.add(dataset_id)
            continue
        if comparator == ">=":
            label = int(record.test_acc >= baseline.test_acc)
        else:
            label = int(record.test_acc > baseline.test_acc)
        instances.append(MetaInstance(
            dataset_id=dataset_id,
            clf=record.spec.clf,
            preproc=record.spec.preproc,
            metafeatures=vector.values,
            label=label,
        ))
    for dataset_id in sorted(missing):
        logger.warning(f"{dataset_id}: no metafeatures, skipping its pipelines")
    logger.info(f"Built {len(instances)} meta-instances from {len(store)} records")
    return instances


def write_metadataset(instances: List[MetaInstance], path: Path) -> None:
    """CSV with dataset_id, clf, the 49 predictive features and label."""
    names = feature_names(pooled=False)
    frame = pd.DataFrame(feature_matrix(instances), columns=names)
    frame.insert(0, "clf", [instance.clf.value for instance in instances])
    frame.insert(0, "dataset_id", [instance.dataset_id for instance in instances])
    frame["label"] = label_vector(instances)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")


def _onehot_preproc(row: np.ndarray, line: int, path: Path) -> PreprocessorKind:
    hot = np.flatnonzero(row == 1.0)
    if hot.size != 1 or np.count_nonzero(row) != 1:
        raise ValidationError(f"{path} row {line}: exactly one preprocessor indicator must be set")
    return PREPROCESSORS[int(hot[0])]


def read_metadataset(path: Path, clf: Optional[ClassifierKind] = None) -> List[MetaInstance]:
    """Read a metadataset CSV, optionally keeping one classifier's instances."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype={"dataset_id": str, "clf": str}, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"cannot read metadataset {path}: {e}")
    expected = ["dataset_id", "clf", *feature_names(pooled=False), "label"]
    if list(frame.columns) != expected:
        missing = [name for name in expected if name not in frame.columns]
        raise ValidationError(f"{path}: unexpected columns (missing: {', '.join(missing) or 'none'})")

    metafeatures = frame[METAFEATURE_NAMES].to_numpy(dtype=np.float64)
    indicators = frame[PREPROC_FEATURES].to_numpy(dtype=np.float64)
    instances = []
    for i, row in enumerate(frame.itertuples(index=False)):
        try:
            kind = ClassifierKind.parse(row.clf)
        except ValueError as e:
            raise ValidationError(f"{path} row {i + 1}: {e}")
        if clf is not None and kind is not ClassifierKind.parse(clf):
            continue
        instances.append(MetaInstance(
            dataset_id=row.dataset_id,
            clf=kind,
            preproc=_onehot_preproc(indicators[i], i + 1, path),
            metafeatures=metafeatures[i],
            label=int(row.label),
        ))
    return instances
