#!/usr/bin/env python3
"""
pipemeta - Core Configuration

Handles environment variables, key=value configuration files and the validated
run configuration handed to each command.
"""

import os
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .validation import ValidationError

# Load environment variables
load_dotenv()

CLEAN_MODES = ["pre-split", "post-split"]
VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
DEFAULT_MAX_MATRIX_BYTES = 2 * 1024**3


class PipemetaConfig:
    """Environment-level configuration for the workbench."""

    def __init__(self):
        # Reproducibility
        self.seed = self._optional_int("PIPEMETA_SEED")

        # Execution
        self.jobs = self._int_or_default("PIPEMETA_JOBS", 1)
        self.clean_mode = os.getenv("PIPEMETA_CLEAN_MODE", "pre-split").lower()
        self.split_ratio = float(os.getenv("PIPEMETA_SPLIT_RATIO", "0.7"))

        # Preprocessor limits
        self.ica_max_iter = self._int_or_default("PIPEMETA_ICA_MAX_ITER", 200)
        self.ica_tol = float(os.getenv("PIPEMETA_ICA_TOL", "1e-4"))
        self.max_matrix_bytes = self._int_or_default("PIPEMETA_MAX_MATRIX_BYTES", DEFAULT_MAX_MATRIX_BYTES)

        # Logging Configuration
        self.log_level = os.getenv("LOG_LEVEL", "INFO").upper()
        self.log_format = os.getenv("LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        self.log_dir = os.getenv("PIPEMETA_LOG_DIR")

        self._validate_config()

    @staticmethod
    def _optional_int(name: str) -> Optional[int]:
        raw = os.getenv(name)
        if raw is None or raw.strip() == "":
            return None
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"Invalid {name}: {raw!r} is not an integer")

    @classmethod
    def _int_or_default(cls, name: str, default: int) -> int:
        value = cls._optional_int(name)
        return default if value is None else value

    def _validate_config(self):
        """Validate configuration settings."""
        if self.clean_mode not in CLEAN_MODES:
            raise ValueError(f"Invalid clean mode: {self.clean_mode}. Must be one of {CLEAN_MODES}")

        if self.log_level not in VALID_LOG_LEVELS:
            raise ValueError(f"Invalid log level: {self.log_level}. Must be one of {VALID_LOG_LEVELS}")

        if self.jobs < 1:
            raise ValueError(f"Invalid job count: {self.jobs}. Must be at least 1")

        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError(f"Invalid split ratio: {self.split_ratio}. Must be strictly between 0 and 1")

        if self.ica_max_iter < 1 or self.ica_tol <= 0:
            raise ValueError("ICA iteration cap and tolerance must be positive")

        if self.max_matrix_bytes < 1:
            raise ValueError(f"Invalid matrix byte limit: {self.max_matrix_bytes}. Must be at least 1")

    def get_settings_info(self) -> Dict[str, Any]:
        """Get configuration information for logging."""
        return {
            "seed": self.seed,
            "jobs": self.jobs,
            "clean_mode": self.clean_mode,
            "split_ratio": self.split_ratio,
            "ica_max_iter": self.ica_max_iter,
            "ica_tol": self.ica_tol,
            "max_matrix_bytes": self.max_matrix_bytes,
            "log_level": self.log_level,
            "log_dir": self.log_dir,
        }


def load_config_file(path: Path) -> Dict[str, str]:
    """Read a key=value configuration file into argparse destination names.

    Keys may be written as flags (``--clean-mode``) or plain names
    (``clean_mode``); both map to ``clean_mode``.
    """
    if not Path(path).is_file():
        raise ValidationError(f"config file does not exist: {path}")

    values = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            continue
        values[key.strip().lstrip("-").replace("-", "_")] = value
    return values


class RunConfig(BaseModel):
    """Validated settings for one command invocation."""

    model_config = ConfigDict(frozen=True)

    data_dir: Optional[Path] = None
    input_paths: Dict[str, Path] = Field(default_factory=dict)
    out_paths: Dict[str, Path] = Field(default_factory=dict)
    seed: Optional[int] = None
    jobs: int = Field(default=1, ge=1)
    clean_mode: Literal["pre-split", "post-split"] = "pre-split"
    split_ratio: float = Field(default=0.7, gt=0.0, lt=1.0)
    accuracy_comparator: Literal[">", ">="] = ">"
    label_comparator: Literal[">=", ">"] = ">="
    metric: Literal["relative", "absolute"] = "relative"
    mode_includes_none: bool = True
    pooled: bool = False
    ica_max_iter: int = Field(default=200, ge=1)
    ica_tol: float = Field(default=1e-4, gt=0.0)
    max_matrix_bytes: int = Field(default=DEFAULT_MAX_MATRIX_BYTES, ge=1)

    @model_validator(mode="after")
    def _paths_distinct(self) -> "RunConfig":
        paths = [p.resolve() for p in self.input_paths.values()]
        paths += [p.resolve() for p in self.out_paths.values()]
        if self.data_dir is not None:
            paths.append(self.data_dir.resolve())
        if len(paths) != len(set(paths)):
            raise ValueError("input and output paths must all be distinct")
        return self

    def require_seed(self) -> int:
        """Return the seed, failing when a randomized command has none."""
        if self.seed is None:
            raise ValidationError("a seed is required: pass --seed or set PIPEMETA_SEED")
        return self.seed
