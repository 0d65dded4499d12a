#!/usr/bin/env python3
"""
Decision agents choosing a preprocessor for a (dataset, classifier) task.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional

import numpy as np

from ..core.exceptions import SimulationError
from ..core.logging_utils import get_component_logger
from ..core.validation import validate_enum_param
from ..learners import ClassifierKind
from ..metafeatures import MetafeatureVector
from ..metalearning import Metamodel, predictive_features
from ..runner import ResultsStore
from ..runner.analytics import PREPROCESSORS
from ..transforms import PreprocessorKind

logger = get_component_logger("agents")

OPTIONS = list(PreprocessorKind)
METRICS = ("relative", "absolute")


class AgentKind(str, Enum):
    NONE = "None"
    RANDOM = "Random"
    MODE = "Mode"
    ORACLE = "Oracle"
    OPTIMAL = "Optimal"


@dataclass(frozen=True)
class Task:
    dataset_id: str
    clf: ClassifierKind


def mode_counts(store: ResultsStore, clf: ClassifierKind,
                datasets: Optional[Iterable[str]] = None) -> Dict[PreprocessorKind, int]:
    """Per option, the number of datasets where it strictly beat the baseline's test accuracy.

    The ``None`` option counts datasets where no preprocessor did. Datasets
    without an ok baseline for ``clf`` are not counted.
    """
    clf = ClassifierKind.parse(clf)
    counts = {option: 0 for option in OPTIONS}
    for dataset_id in (store.dataset_ids() if datasets is None else datasets):
        baseline = store.get((dataset_id, PreprocessorKind.NONE, clf))
        if baseline is None or not baseline.ok:
            continue
        improved = False
        for preproc in PREPROCESSORS:
            record = store.get((dataset_id, preproc, clf))
            if record is not None and record.ok and record.test_acc > baseline.test_acc:
                counts[preproc] += 1
                improved = True
        if not improved:
            counts[PreprocessorKind.NONE] += 1
    return counts


def _most_counted(counts: Dict[PreprocessorKind, int], candidates: List[PreprocessorKind]) -> PreprocessorKind:
    # max() keeps the first maximum, so ties follow enum order
    return max(candidates, key=lambda option: counts[option])


def best_option(task: Task, store: ResultsStore) -> Optional[PreprocessorKind]:
    """The ok option with the highest test accuracy (ties in enum order)."""
    best, best_acc = None, -np.inf
    for option in OPTIONS:
        record = store.get((task.dataset_id, option, task.clf))
        if record is not None and record.ok and record.test_acc > best_acc:
            best, best_acc = option, record.test_acc
    return best


def decide(agent: AgentKind, task: Task, train_store: ResultsStore, metamodel: Optional[Metamodel] = None,
           mf: Optional[MetafeatureVector] = None, seed: int = 0, test_store: Optional[ResultsStore] = None,
           mode_includes_none: bool = True,
           counts: Optional[Dict[PreprocessorKind, int]] = None) -> PreprocessorKind:
    """Choose a preprocessor for ``task``.

    Mode and Oracle rank options by ``mode_counts`` over ``train_store``
    (pass ``counts`` to reuse them). Optimal looks the answer up in
    ``test_store``.
    """
    agent = AgentKind(agent)
    if agent is AgentKind.NONE:
        return PreprocessorKind.NONE
    if agent is AgentKind.RANDOM:
        return OPTIONS[int(np.random.default_rng(seed).integers(len(OPTIONS)))]
    if agent is AgentKind.OPTIMAL:
        if test_store is None:
            raise SimulationError("the Optimal agent needs the test store")
        choice = best_option(task, test_store)
        return PreprocessorKind.NONE if choice is None else choice

    if counts is None:
        counts = mode_counts(train_store, task.clf)
    if sum(counts.values()) == 0:
        logger.warning(f"{agent.value} agent has no training outcomes for {task.clf.value}; choosing None")
        return PreprocessorKind.NONE

    if agent is AgentKind.MODE:
        candidates = OPTIONS if mode_includes_none else PREPROCESSORS
        return _most_counted(counts, candidates)

    if metamodel is None or mf is None:
        missing = "metamodel" if metamodel is None else "metafeatures"
        logger.warning(f"Oracle agent has no {missing} for {task.dataset_id}/{task.clf.value}; choosing None")
        return PreprocessorKind.NONE
    X = np.vstack([predictive_features(mf.values, preproc, task.clf, metamodel.pooled) for preproc in PREPROCESSORS])
    predicted = metamodel.predict(X)
    survivors = [preproc for preproc, label in zip(PREPROCESSORS, predicted) if label == 1]
    if not survivors:
        return PreprocessorKind.NONE
    return _most_counted(counts, survivors)


@dataclass(frozen=True)
class TaskScore:
    pct_worse: float
    test_acc: float
    best_acc: float
    fell_back: bool


def score_task(choice: PreprocessorKind, task: Task, test_store: ResultsStore,
               metric: str = "relative") -> Optional[TaskScore]:
    """Percent worse than the best option: 100 * (a - a*) / a* (or 100 * (a - a*) when absolute).

    A failed choice is scored by the baseline. Returns None when the task
    cannot be scored: the baseline failed or the best accuracy is 0.
    """
    metric = validate_enum_param(metric, METRICS, "metric")
    baseline = test_store.get((task.dataset_id, PreprocessorKind.NONE, task.clf))
    if baseline is None or not baseline.ok:
        return None
    best = best_option(task, test_store)
    best_acc = test_store.get((task.dataset_id, best, task.clf)).test_acc
    if best_acc == 0:
        logger.warning(f"{task.dataset_id}/{task.clf.value}: every option has zero test accuracy; task excluded")
        return None

    record = test_store.get((task.dataset_id, PreprocessorKind.parse(choice), task.clf))
    fell_back = record is None or not record.ok
    acc = baseline.test_acc if fell_back else record.test_acc
    if metric == "relative":
        pct = 100.0 * (acc - best_acc) / best_acc
    else:
        pct = 100.0 * (acc - best_acc)
    return TaskScore(pct_worse=pct, test_acc=acc, best_acc=best_acc, fell_back=fell_back)
