#!/usr/bin/env python3
"""
pipemeta - Validation Utilities

Parameter validation shared by the command line and the operation entry points.
"""

from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .exceptions import PipemetaError


class ValidationError(PipemetaError):
    """Raised when a parameter or operation precondition is violated."""
    pass


def validate_enum_param(value: Any, valid_values: Sequence[str], param_name: str) -> str:
    """Validate and return an enum parameter."""
    if not isinstance(value, str):
        raise ValidationError(f"{param_name} must be a string")

    if value not in valid_values:
        raise ValidationError(f"{param_name} must be one of: {', '.join(valid_values)}")

    return value


def validate_integer_param(value: Any, param_name: str, min_value: Optional[int] = None, max_value: Optional[int] = None) -> int:
    """Validate and return an integer parameter."""
    if isinstance(value, bool):
        raise ValidationError(f"{param_name} must be an integer")
    try:
        int_value = int(value)
    except (ValueError, TypeError):
        raise ValidationError(f"{param_name} must be an integer")

    if min_value is not None and int_value < min_value:
        raise ValidationError(f"{param_name} must be at least {min_value}")

    if max_value is not None and int_value > max_value:
        raise ValidationError(f"{param_name} must be no more than {max_value}")

    return int_value


def validate_ratio_param(value: Any, param_name: str) -> float:
    """Validate a ratio strictly between 0 and 1."""
    try:
        ratio = float(value)
    except (ValueError, TypeError):
        raise ValidationError(f"{param_name} must be a number")

    if not 0.0 < ratio < 1.0:
        raise ValidationError(f"{param_name} must be strictly between 0 and 1, got {ratio}")

    return ratio


def validate_boolean_param(value: Any, param_name: str) -> bool:
    """Validate and return a boolean parameter."""
    if isinstance(value, bool):
        return value

    if isinstance(value, str):
        if value.lower() in ['true', '1', 'yes', 'on']:
            return True
        elif value.lower() in ['false', '0', 'no', 'off']:
            return False

    if isinstance(value, int):
        if value == 1:
            return True
        elif value == 0:
            return False

    raise ValidationError(f"{param_name} must be a boolean value")


def validate_existing_path(value: Any, param_name: str, directory: bool = False) -> Path:
    """Validate that a path exists (and is a directory when requested)."""
    if value is None:
        raise ValidationError(f"{param_name} is required")

    path = Path(value)
    if not path.exists():
        raise ValidationError(f"{param_name} does not exist: {path}")
    if directory and not path.is_dir():
        raise ValidationError(f"{param_name} must be a directory: {path}")
    if not directory and not path.is_file():
        raise ValidationError(f"{param_name} must be a file: {path}")

    return path


def validate_feature_matrix(X: Any, param_name: str = "X", min_rows: int = 1) -> np.ndarray:
    """Validate a finite 2-D real matrix and return it as float64."""
    try:
        matrix = np.asarray(X, dtype=np.float64)
    except (TypeError, ValueError):
        raise ValidationError(f"{param_name} must be a real-valued matrix")

    if matrix.ndim != 2:
        raise ValidationError(f"{param_name} must be 2-dimensional, got {matrix.ndim} dimensions")
    if matrix.shape[0] < min_rows:
        raise ValidationError(f"{param_name} must have at least {min_rows} row(s)")
    if matrix.size and not np.isfinite(matrix).all():
        rows, cols = np.nonzero(~np.isfinite(matrix))
        raise ValidationError(f"{param_name} has a non-finite entry at row {rows[0]}, column {cols[0]}")

    return matrix


def validate_label_vector(y: Any, n_rows: int, param_name: str = "y") -> np.ndarray:
    """Validate a 1-D label vector of the expected length."""
    labels = np.asarray(y)
    if labels.ndim != 1:
        raise ValidationError(f"{param_name} must be 1-dimensional")
    if labels.shape[0] != n_rows:
        raise ValidationError(f"{param_name} has {labels.shape[0]} entries, expected {n_rows}")
    return labels
