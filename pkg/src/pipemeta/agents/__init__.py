"""
Agent Module

Preprocessor-choosing agents and the AutoML simulation that scores them.
"""

from .agents import AgentKind, Task, TaskScore, best_option, decide, mode_counts, score_task
from .simulation import SimulationReport, preprocessor_choice_counts, simulate, simulate_many

__all__ = [
    "AgentKind",
    "Task",
    "TaskScore",
    "mode_counts",
    "best_option",
    "decide",
    "score_task",
    "SimulationReport",
    "simulate",
    "simulate_many",
    "preprocessor_choice_counts",
]
