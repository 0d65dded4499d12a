#!/usr/bin/env python3
"""
Pipeline specs, experiment records and the JSON-lines results store.

One record per line with the fields, in order::

    dataset_id, preproc, clf, seed, status, train_time_s, test_time_s,
    train_acc, test_acc, out_dim, error_detail
"""

import json
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, model_validator

from ..core.exceptions import UnreadableFileError
from ..core.logging_utils import get_component_logger
from ..core.validation import ValidationError
from ..learners import ClassifierKind
from ..transforms import PreprocessorKind

logger = get_component_logger("runner")

RECORD_FIELDS = (
    "dataset_id",
    "preproc",
    "clf",
    "seed",
    "status",
    "train_time_s",
    "test_time_s",
    "train_acc",
    "test_acc",
    "out_dim",
    "error_detail",
)

RecordKey = Tuple[str, PreprocessorKind, ClassifierKind]


class RecordStatus(str, Enum):
    OK = "ok"
    CONVERGENCE_ERROR = "convergence_error"
    RESOURCE_ERROR = "resource_error"
    OTHER_ERROR = "other_error"


class PipelineSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    dataset_id: str = Field(min_length=1)
    preproc: PreprocessorKind
    clf: ClassifierKind
    seed: int

    @property
    def key(self) -> RecordKey:
        return (self.dataset_id, self.preproc, self.clf)

    @property
    def is_baseline(self) -> bool:
        return self.preproc is PreprocessorKind.NONE


class ExperimentRecord(BaseModel):
    """Outcome of one pipeline; accuracies are present exactly when status is ok."""

    model_config = ConfigDict(frozen=True)

    spec: PipelineSpec
    status: RecordStatus
    train_time_s: float = Field(ge=0.0)
    test_time_s: float = Field(ge=0.0)
    train_acc: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    test_acc: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    out_dim: int = Field(ge=0)
    error_detail: str = ""

    @model_validator(mode="after")
    def _accuracies_match_status(self) -> "ExperimentRecord":
        has_accuracies = self.train_acc is not None and self.test_acc is not None
        partial = (self.train_acc is None) != (self.test_acc is None)
        if partial or has_accuracies != (self.status is RecordStatus.OK):
            raise ValueError(f"{self.spec.key}: accuracies must be present exactly when status is ok")
        return self

    @property
    def key(self) -> RecordKey:
        return self.spec.key

    @property
    def ok(self) -> bool:
        return self.status is RecordStatus.OK

    def to_row(self) -> Dict[str, object]:
        return {
            "dataset_id": self.spec.dataset_id,
            "preproc": self.spec.preproc.value,
            "clf": self.spec.clf.value,
            "seed": self.spec.seed,
            "status": self.status.value,
            "train_time_s": self.train_time_s,
            "test_time_s": self.test_time_s,
            "train_acc": self.train_acc,
            "test_acc": self.test_acc,
            "out_dim": self.out_dim,
            "error_detail": self.error_detail,
        }

    @classmethod
    def from_row(cls, row: Dict[str, object]) -> "ExperimentRecord":
        missing = [name for name in RECORD_FIELDS if name not in row]
        if missing:
            raise ValidationError(f"record is missing field(s): {', '.join(missing)}")
        spec = PipelineSpec(
            dataset_id=row["dataset_id"],
            preproc=PreprocessorKind.parse(row["preproc"]),
            clf=ClassifierKind.parse(row["clf"]),
            seed=row["seed"],
        )
        return cls(
            spec=spec,
            status=row["status"],
            train_time_s=row["train_time_s"],
            test_time_s=row["test_time_s"],
            train_acc=row["train_acc"],
            test_acc=row["test_acc"],
            out_dim=row["out_dim"],
            error_detail=row["error_detail"] or "",
        )

    def to_json(self) -> str:
        return json.dumps(self.to_row())


def canonical_sort_key(key: RecordKey) -> Tuple[str, int, int]:
    dataset_id, preproc, clf = key
    return (dataset_id, list(PreprocessorKind).index(preproc), list(ClassifierKind).index(clf))


def append_record(handle: TextIO, record: ExperimentRecord) -> None:
    """Append one record line and flush so partial runs stay resumable."""
    handle.write(record.to_json() + "\n")
    handle.flush()


class ResultsStore:
    """Experiment records keyed by (dataset_id, preproc, clf), at most one per key."""

    def __init__(self, records: Iterable[ExperimentRecord] = ()):
        self._records: Dict[RecordKey, ExperimentRecord] = {}
        for record in records:
            self.append(record)

    def append(self, record: ExperimentRecord) -> None:
        if record.key in self._records:
            dataset_id, preproc, clf = record.key
            raise ValidationError(f"duplicate record for ({dataset_id}, {preproc.value}, {clf.value})")
        self._records[record.key] = record

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: RecordKey) -> bool:
        return key in self._records

    def __iter__(self) -> Iterator[ExperimentRecord]:
        return iter(self.records())

    def get(self, key: RecordKey) -> Optional[ExperimentRecord]:
        return self._records.get(key)

    def records(self) -> List[ExperimentRecord]:
        """All records in canonical (dataset, preproc, clf) order."""
        return [self._records[key] for key in sorted(self._records, key=canonical_sort_key)]

    def dataset_ids(self) -> List[str]:
        return sorted({key[0] for key in self._records})

    def baseline_for(self, record: ExperimentRecord) -> Optional[ExperimentRecord]:
        return self._records.get((record.spec.dataset_id, PreprocessorKind.NONE, record.spec.clf))

    def ok_pairs(self) -> List[Tuple[ExperimentRecord, ExperimentRecord]]:
        """(non-baseline, baseline) pairs where both records are ok."""
        pairs = []
        for record in self.records():
            if record.spec.is_baseline or not record.ok:
                continue
            baseline = self.baseline_for(record)
            if baseline is not None and baseline.ok:
                pairs.append((record, baseline))
        return pairs

    def subset(self, dataset_ids: Sequence[str]) -> "ResultsStore":
        wanted = set(dataset_ids)
        return ResultsStore(record for record in self.records() if record.spec.dataset_id in wanted)

    @classmethod
    def load(cls, path: Path, drop_truncated_tail: bool = False) -> "ResultsStore":
        """Read a JSON-lines results file; blank lines are ignored.

        With ``drop_truncated_tail`` an unparseable final line (an interrupted
        append) is discarded with a warning instead of failing the load.
        """
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except (OSError, UnicodeDecodeError) as e:
            raise UnreadableFileError(f"cannot read results {path}: {e}")

        store = cls()
        last = max((i for i, line in enumerate(lines, start=1) if line.strip()), default=0)
        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = ExperimentRecord.from_row(json.loads(line))
            except (json.JSONDecodeError, PydanticValidationError, ValidationError, ValueError, TypeError) as e:
                if drop_truncated_tail and number == last:
                    logger.warning(f"{path} line {number}: dropping truncated record")
                    break
                raise ValidationError(f"{path} line {number}: invalid record ({e})")
            try:
                store.append(record)
            except ValidationError as e:
                raise ValidationError(f"{path} line {number}: {e}")
        logger.debug(f"Loaded {len(store)} records from {path}")
        return store

    def save(self, path: Path) -> None:
        """Rewrite the file with every record in canonical order."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as handle:
            for record in self.records():
                handle.write(record.to_json() + "\n")
