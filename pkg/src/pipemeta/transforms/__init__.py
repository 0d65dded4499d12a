"""
Preprocessor Module

Fit-on-train / transform-any wrappers around the eight preprocessors.
"""

from .preprocessors import (
    DEFAULT_SETTINGS,
    FittedTransform,
    PreprocessorKind,
    TransformSettings,
    expected_out_dim,
    fit,
    fit_transform,
    transform,
)

__all__ = [
    "PreprocessorKind",
    "FittedTransform",
    "TransformSettings",
    "DEFAULT_SETTINGS",
    "expected_out_dim",
    "fit",
    "fit_transform",
    "transform",
]
