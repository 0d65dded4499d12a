"""
Shared logging utilities for pipemeta components.
"""
import logging
import sys
from pathlib import Path
from typing import Optional

from .config import PipemetaConfig

# Component loggers and the file each writes to when a log directory is configured
COMPONENT_LOG_FILES = {
    "cli": "cli.log",
    "data": "datasets.log",
    "transforms": "transforms.log",
    "learners": "learners.log",
    "runner": "pipeline-runner.log",
    "metafeatures": "metafeatures.log",
    "metalearning": "metalearning.log",
    "agents": "agents.log",
    "reports": "reports.log",
}

_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(config: PipemetaConfig, log_level: Optional[str] = None) -> logging.Logger:
    """Set up logging for a command invocation.

    Console output goes to stderr so stdout stays reserved for reports. When
    ``config.log_dir`` is set, each component also appends to its own file.
    """
    level = getattr(logging, (log_level or config.log_level).upper())
    formatter = logging.Formatter(config.log_format or _FORMAT)

    root_logger = logging.getLogger("pipemeta")
    root_logger.setLevel(level)
    root_logger.handlers.clear()
    root_logger.propagate = False

    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setFormatter(formatter)
    root_logger.addHandler(stderr_handler)

    logs_dir = Path(config.log_dir) if config.log_dir else None
    if logs_dir is not None:
        logs_dir.mkdir(parents=True, exist_ok=True)

    for component, log_filename in COMPONENT_LOG_FILES.items():
        component_logger = logging.getLogger(f"pipemeta.{component}")
        component_logger.setLevel(level)
        for handler in list(component_logger.handlers):
            component_logger.removeHandler(handler)
            handler.close()
        if logs_dir is not None:
            file_handler = logging.FileHandler(logs_dir / log_filename, mode="a")
            file_handler.setFormatter(formatter)
            component_logger.addHandler(file_handler)
        # Component records still reach the stderr handler on the package logger
        component_logger.propagate = True

    return logging.getLogger("pipemeta.cli")


def get_component_logger(component: str) -> logging.Logger:
    """Get a component logger (e.g. 'runner', 'agents').

    Unknown component names still return a child of the package logger.
    """
    return logging.getLogger(f"pipemeta.{component}")


def close_logging() -> None:
    """Detach and close the log files opened by setup_logging.

    Console handlers are left alone; their stream may already be closed.
    """
    loggers = [logging.getLogger("pipemeta")]
    loggers += [logging.getLogger(f"pipemeta.{name}") for name in COMPONENT_LOG_FILES]
    for logger in loggers:
        for handler in list(logger.handlers):
            if isinstance(handler, logging.FileHandler):
                logger.removeHandler(handler)
                handler.close()
