#!/usr/bin/env python3
"""
Baseline comparisons over a results store.

Every statistic compares an ok non-baseline record with the ok baseline
(preproc None) of the same dataset and classifier. Pairs involving a failed
record are skipped.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from ..core.exceptions import ZeroBaselineTimeError
from ..core.logging_utils import get_component_logger
from ..core.validation import ValidationError, validate_enum_param
from ..learners import ClassifierKind
from ..transforms import PreprocessorKind
from .records import ResultsStore

logger = get_component_logger("runner")

PREPROCESSORS = [kind for kind in PreprocessorKind if kind is not PreprocessorKind.NONE]
CLASSIFIERS = list(ClassifierKind)
COMPARATORS = (">", ">=")

_PAIR_COLUMNS = [
    "dataset_id", "preproc", "clf",
    "train_time_s", "test_time_s", "train_acc", "test_acc",
    "base_train_time_s", "base_test_time_s", "base_train_acc", "base_test_acc",
]


def relative_runtime(t: float, t_baseline: float) -> float:
    """(t - t_baseline) / t_baseline; 1.0 means twice the baseline time."""
    if t_baseline <= 0:
        raise ZeroBaselineTimeError(f"relative runtime is undefined for a baseline time of {t_baseline}")
    return (t - t_baseline) / t_baseline


def paired_frame(store: ResultsStore) -> pd.DataFrame:
    """One row per ok (pipeline, baseline) pair."""
    rows = []
    for record, baseline in store.ok_pairs():
        rows.append({
            "dataset_id": record.spec.dataset_id,
            "preproc": record.spec.preproc.value,
            "clf": record.spec.clf.value,
            "train_time_s": record.train_time_s,
            "test_time_s": record.test_time_s,
            "train_acc": record.train_acc,
            "test_acc": record.test_acc,
            "base_train_time_s": baseline.train_time_s,
            "base_test_time_s": baseline.test_time_s,
            "base_train_acc": baseline.train_acc,
            "base_test_acc": baseline.test_acc,
        })
    return pd.DataFrame(rows, columns=_PAIR_COLUMNS)


def _improved(values: pd.Series, baseline: pd.Series, comparator: str) -> pd.Series:
    return values > baseline if comparator == ">" else values >= baseline


@dataclass(frozen=True)
class ImprovementCounts:
    """Per (preproc, clf) dataset counts of faster training, better accuracy, and both."""

    time: pd.DataFrame
    accuracy: pd.DataFrame
    both: pd.DataFrame
    comparator: str = ">"

    def cell(self, preproc: PreprocessorKind, clf: ClassifierKind) -> Tuple[int, int, int]:
        p, c = PreprocessorKind.parse(preproc).value, ClassifierKind.parse(clf).value
        return int(self.time.loc[p, c]), int(self.accuracy.loc[p, c]), int(self.both.loc[p, c])

    def _means(self, axis: int) -> pd.DataFrame:
        return pd.DataFrame({
            "time": self.time.mean(axis=axis),
            "accuracy": self.accuracy.mean(axis=axis),
            "both": self.both.mean(axis=axis),
        })

    def row_means(self) -> pd.DataFrame:
        """Mean over classifiers, one row per preprocessor."""
        return self._means(axis=1)

    def column_means(self) -> pd.DataFrame:
        """Mean over preprocessors, one row per classifier."""
        return self._means(axis=0)

    def grand_mean(self) -> Tuple[float, float, float]:
        return (
            float(self.time.to_numpy().mean()),
            float(self.accuracy.to_numpy().mean()),
            float(self.both.to_numpy().mean()),
        )


def improvement_counts(store: ResultsStore, comparator: str = ">") -> ImprovementCounts:
    """Count datasets where each pipeline beat its baseline.

    Time counts strictly faster training. Accuracy compares test accuracy with
    ``comparator`` (strict by default).
    """
    comparator = validate_enum_param(comparator, COMPARATORS, "comparator")
    pairs = paired_frame(store)
    index = [kind.value for kind in PREPROCESSORS]
    columns = [kind.value for kind in CLASSIFIERS]

    def table(flags: pd.Series) -> pd.DataFrame:
        counts = pd.DataFrame(0, index=index, columns=columns, dtype=np.int64)
        if not pairs.empty:
            grouped = flags.groupby([pairs["preproc"], pairs["clf"]]).sum()
            for (preproc, clf), count in grouped.items():
                counts.loc[preproc, clf] = int(count)
        return counts

    faster = pairs["train_time_s"] < pairs["base_train_time_s"]
    better = _improved(pairs["test_acc"], pairs["base_test_acc"], comparator)
    return ImprovementCounts(
        time=table(faster),
        accuracy=table(better),
        both=table(faster & better),
        comparator=comparator,
    )


def accuracy_deltas(store: ResultsStore) -> pd.DataFrame:
    """Per-preprocessor mean and population std of accuracy minus baseline accuracy.

    Values are percentage points. Preprocessors without any ok pair get NaN.
    """
    pairs = paired_frame(store)
    pairs["train_delta"] = 100.0 * (pairs["train_acc"] - pairs["base_train_acc"])
    pairs["test_delta"] = 100.0 * (pairs["test_acc"] - pairs["base_test_acc"])

    rows = []
    for kind in PREPROCESSORS:
        group = pairs[pairs["preproc"] == kind.value]
        if group.empty:
            rows.append({"preproc": kind.value, "n_pairs": 0, "train_mean": np.nan, "train_std": np.nan,
                         "test_mean": np.nan, "test_std": np.nan})
            continue
        rows.append({
            "preproc": kind.value,
            "n_pairs": int(len(group)),
            "train_mean": float(group["train_delta"].mean()),
            "train_std": float(group["train_delta"].std(ddof=0)),
            "test_mean": float(group["test_delta"].mean()),
            "test_std": float(group["test_delta"].std(ddof=0)),
        })
    return pd.DataFrame(rows).set_index("preproc")


def relative_runtimes(pairs: pd.DataFrame, phase: str) -> Tuple[np.ndarray, int]:
    """Relative runtimes for one phase ("train" or "test") and the count of
    pairs skipped for a zero baseline time."""
    values, skipped = [], 0
    for t, t_baseline in zip(pairs[f"{phase}_time_s"], pairs[f"base_{phase}_time_s"]):
        try:
            values.append(relative_runtime(t, t_baseline))
        except ZeroBaselineTimeError:
            skipped += 1
    if skipped:
        logger.warning(f"skipped {skipped} {phase} pair(s) with a zero baseline time")
    return np.asarray(values, dtype=np.float64), skipped


@dataclass(frozen=True)
class PhaseHistogram:
    counts: np.ndarray
    tail_count: int
    tail_max: float
    skipped: int

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.tail_count


@dataclass(frozen=True)
class RuntimeHistogram:
    edges: np.ndarray
    train: PhaseHistogram
    test: PhaseHistogram
    truncate_at: float

    @property
    def is_empty(self) -> bool:
        return self.train.total == 0 and self.test.total == 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "bin_low": self.edges[:-1],
            "bin_high": self.edges[1:],
            "train_count": self.train.counts,
            "test_count": self.test.counts,
        })


def runtime_histogram(store: ResultsStore, truncate_at: float = 3.0, bin_width: float = 0.25) -> RuntimeHistogram:
    """Bin relative runtimes on [-1, truncate_at]; larger values form a reported tail."""
    if truncate_at <= -1.0 or bin_width <= 0:
        raise ValidationError("truncate_at must exceed -1 and bin_width must be positive")
    n_bins = max(1, int(math.ceil((truncate_at + 1.0) / bin_width - 1e-9)))
    edges = np.linspace(-1.0, truncate_at, n_bins + 1)
    pairs = paired_frame(store)

    def phase(name: str) -> PhaseHistogram:
        values, skipped = relative_runtimes(pairs, name)
        tail = values[values > truncate_at]
        counts, _ = np.histogram(values[values <= truncate_at], bins=edges)
        return PhaseHistogram(
            counts=counts.astype(np.int64),
            tail_count=int(tail.size),
            tail_max=float(tail.max()) if tail.size else float("nan"),
            skipped=skipped,
        )

    return RuntimeHistogram(edges=edges, train=phase("train"), test=phase("test"), truncate_at=truncate_at)


@dataclass(frozen=True)
class RuntimeSummary:
    n_pairs: int
    share_faster_train: float
    share_faster_test: float
    share_lower_test_accuracy: float
    train_runtime_q25: float


def runtime_summary(store: ResultsStore) -> RuntimeSummary:
    """Headline shares over all ok non-baseline pairs."""
    pairs = paired_frame(store)
    if pairs.empty:
        return RuntimeSummary(0, float("nan"), float("nan"), float("nan"), float("nan"))
    relative_train, _ = relative_runtimes(pairs, "train")
    return RuntimeSummary(
        n_pairs=int(len(pairs)),
        share_faster_train=float((pairs["train_time_s"] < pairs["base_train_time_s"]).mean()),
        share_faster_test=float((pairs["test_time_s"] < pairs["base_test_time_s"]).mean()),
        share_lower_test_accuracy=float((pairs["test_acc"] < pairs["base_test_acc"]).mean()),
        train_runtime_q25=float(np.quantile(relative_train, 0.25)) if relative_train.size else float("nan"),
    )


def top_pipeline_usage(store: ResultsStore, tolerances: Sequence[float] = (0.0, 0.05, 0.10)) -> pd.DataFrame:
    """How often near-best pipelines use a preprocessor.

    For each dataset, a pipeline is near-best when its test accuracy is at
    least ``(1 - tolerance)`` times the dataset's best ok test accuracy.
    Counts are pooled over datasets.
    """
    rows = []
    ok = [record for record in store if record.ok]
    frame = pd.DataFrame({
        "dataset_id": [r.spec.dataset_id for r in ok],
        "preproc": [r.spec.preproc.value for r in ok],
        "test_acc": [r.test_acc for r in ok],
    })
    best = frame.groupby("dataset_id")["test_acc"].transform("max") if not frame.empty else pd.Series(dtype=float)
    for tolerance in tolerances:
        if tolerance < 0:
            raise ValidationError(f"tolerance must be non-negative, got {tolerance}")
        if frame.empty:
            rows.append({"tolerance": tolerance, "n_pipelines": 0, "n_with_preproc": 0, "share_with_preproc": np.nan})
            continue
        near = frame[frame["test_acc"] >= best * (1.0 - tolerance) - 1e-12]
        n_with = int((near["preproc"] != PreprocessorKind.NONE.value).sum())
        rows.append({
            "tolerance": tolerance,
            "n_pipelines": int(len(near)),
            "n_with_preproc": n_with,
            "share_with_preproc": n_with / len(near),
        })
    return pd.DataFrame(rows)


def tradeoff_quartiles(store: ResultsStore) -> pd.DataFrame:
    """Accuracy and runtime of the fastest-training, fastest-testing and most
    accurate quarter of pipelines.

    Pairs with a zero baseline time in either phase are left out.
    """
    pairs = paired_frame(store)
    pairs = pairs[(pairs["base_train_time_s"] > 0) & (pairs["base_test_time_s"] > 0)].copy()
    columns = ["group", "n", "mean_test_delta_pp", "mean_rel_train_pct", "mean_rel_test_pct"]
    if pairs.empty:
        return pd.DataFrame(columns=columns).set_index("group")

    pairs["rel_train"] = (pairs["train_time_s"] - pairs["base_train_time_s"]) / pairs["base_train_time_s"]
    pairs["rel_test"] = (pairs["test_time_s"] - pairs["base_test_time_s"]) / pairs["base_test_time_s"]
    pairs["test_delta"] = pairs["test_acc"] - pairs["base_test_acc"]
    quarter = max(1, int(math.ceil(0.25 * len(pairs))))

    groups = {
        "fastest_train": pairs.sort_values("rel_train", kind="stable").head(quarter),
        "fastest_test": pairs.sort_values("rel_test", kind="stable").head(quarter),
        "most_accurate": pairs.sort_values("test_delta", ascending=False, kind="stable").head(quarter),
    }
    rows = [{
        "group": name,
        "n": int(len(group)),
        "mean_test_delta_pp": 100.0 * float(group["test_delta"].mean()),
        "mean_rel_train_pct": 100.0 * float(group["rel_train"].mean()),
        "mean_rel_test_pct": 100.0 * float(group["rel_test"].mean()),
    } for name, group in groups.items()]
    return pd.DataFrame(rows, columns=columns).set_index("group")
