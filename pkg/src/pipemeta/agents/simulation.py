#!/usr/bin/env python3
"""
The AutoML simulation: split datasets 70/30, learn Mode statistics and
metamodels on the training side, and score every agent on the test tasks.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from ..core.exceptions import SimulationError
from ..core.logging_utils import get_component_logger
from ..core.seeding import derive_seed
from ..learners import ClassifierKind
from ..metafeatures import MetafeatureVector
from ..metalearning import build_metadataset, model_for, split_datasets, train_metamodels
from ..runner import ResultsStore
from ..transforms import PreprocessorKind
from .agents import AgentKind, Task, decide, mode_counts, score_task

logger = get_component_logger("agents")

REPORT_COLUMNS = ["agent", "mean_pct_worse", "std_pct_worse", "n_tasks"]


@dataclass(frozen=True)
class SimulationReport:
    summary: pd.DataFrame
    decisions: List[Dict[str, object]] = field(default_factory=list)
    train_datasets: Tuple[str, ...] = ()
    test_datasets: Tuple[str, ...] = ()
    seed: int = 0

    def mean(self, agent: AgentKind) -> float:
        return float(self.summary.loc[AgentKind(agent).value, "mean_pct_worse"])

    def std(self, agent: AgentKind) -> float:
        return float(self.summary.loc[AgentKind(agent).value, "std_pct_worse"])

    def write_csv(self, path: Path) -> None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        self.summary.reset_index().to_csv(path, index=False, columns=REPORT_COLUMNS)

    def write_decision_log(self, path: Path) -> None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with Path(path).open("w", encoding="utf-8") as handle:
            for decision in self.decisions:
                handle.write(json.dumps(decision) + "\n")


def _summarize(scores: Dict[AgentKind, List[float]]) -> pd.DataFrame:
    rows = []
    for agent in AgentKind:
        values = np.asarray(scores[agent], dtype=np.float64)
        rows.append({
            "agent": agent.value,
            "mean_pct_worse": float(values.mean()) if values.size else float("nan"),
            "std_pct_worse": float(values.std()) if values.size else float("nan"),
            "n_tasks": int(values.size),
        })
    return pd.DataFrame(rows, columns=REPORT_COLUMNS).set_index("agent")


def simulate(store: ResultsStore, mf: Dict[str, MetafeatureVector], seed: int, split_ratio: float = 0.7,
             metric: str = "relative", mode_includes_none: bool = True, pooled: bool = False,
             label_comparator: str = ">=") -> SimulationReport:
    """Run all five agents on the held-out tasks.

    Raises:
        SimulationError: fewer than two datasets, or no scorable test task.
    """
    dataset_ids = store.dataset_ids()
    if len(dataset_ids) < 2:
        raise SimulationError(f"simulation needs at least 2 datasets to split, got {len(dataset_ids)}")
    train_ids, test_ids = split_datasets(dataset_ids, derive_seed(seed, "simulation-split"), split_ratio)
    train_store, test_store = store.subset(train_ids), store.subset(test_ids)

    instances = build_metadataset(train_store, mf, comparator=label_comparator)
    models = train_metamodels(instances, derive_seed(seed, "simulation-metamodels"), pooled=pooled) if instances else {}
    counts = {clf: mode_counts(train_store, clf) for clf in ClassifierKind}

    scores: Dict[AgentKind, List[float]] = {agent: [] for agent in AgentKind}
    decisions: List[Dict[str, object]] = []
    skipped = 0
    for dataset_id in test_ids:
        for clf in ClassifierKind:
            task = Task(dataset_id=dataset_id, clf=clf)
            outcomes = []
            for agent in AgentKind:
                choice = decide(
                    agent,
                    task,
                    train_store,
                    metamodel=model_for(models, clf),
                    mf=mf.get(dataset_id),
                    seed=derive_seed(seed, "random-agent", dataset_id, clf.value),
                    test_store=test_store,
                    mode_includes_none=mode_includes_none,
                    counts=counts[clf],
                )
                outcome = score_task(choice, task, test_store, metric=metric)
                if outcome is None:
                    break
                outcomes.append((agent, choice, outcome))
            else:
                for agent, choice, outcome in outcomes:
                    scores[agent].append(outcome.pct_worse)
                    decisions.append({
                        "dataset_id": dataset_id,
                        "clf": clf.value,
                        "agent": agent.value,
                        "choice": choice.value,
                        "test_acc": outcome.test_acc,
                        "best_acc": outcome.best_acc,
                        "pct_worse": outcome.pct_worse,
                        "fell_back": outcome.fell_back,
                    })
                continue
            skipped += 1

    if skipped:
        logger.warning(f"skipped {skipped} test task(s) with a failed baseline or zero best accuracy")
    if not scores[AgentKind.OPTIMAL]:
        raise SimulationError("no scorable test tasks on the test side of the split")
    logger.info(f"Simulated {len(scores[AgentKind.OPTIMAL])} task(s) on {len(test_ids)} test dataset(s)")
    return SimulationReport(
        summary=_summarize(scores),
        decisions=decisions,
        train_datasets=tuple(train_ids),
        test_datasets=tuple(test_ids),
        seed=seed,
    )


def simulate_many(store: ResultsStore, mf: Dict[str, MetafeatureVector], seeds: Sequence[int],
                  **kwargs) -> Tuple[List[SimulationReport], pd.DataFrame]:
    """Repeat the simulation per seed; the frame holds each agent's mean and
    spread of per-seed means."""
    if not seeds:
        raise SimulationError("simulate_many needs at least one seed")
    reports = [simulate(store, mf, seed, **kwargs) for seed in seeds]
    means = pd.concat([report.summary["mean_pct_worse"] for report in reports], axis=1)
    summary = pd.DataFrame({
        "mean_pct_worse": means.mean(axis=1),
        "std_of_means": means.std(axis=1, ddof=0),
        "n_seeds": len(reports),
    })
    summary.index.name = "agent"
    return reports, summary


def preprocessor_choice_counts(report: SimulationReport) -> pd.DataFrame:
    """How often each agent picked each option."""
    frame = pd.DataFrame(report.decisions, columns=["agent", "choice"])
    table = pd.crosstab(frame["agent"], frame["choice"]) if not frame.empty else pd.DataFrame()
    return table.reindex(index=[a.value for a in AgentKind], columns=[p.value for p in PreprocessorKind], fill_value=0)
