"""
Metafeature Module

Simple, statistical, information-theoretic and landmarking descriptors of a
dataset's training partition.
"""

from .extraction import (
    METAFEATURE_NAMES,
    MetafeatureVector,
    extract,
    extract_corpus,
    read_metafeatures,
    write_metafeatures,
)

__all__ = [
    "METAFEATURE_NAMES",
    "MetafeatureVector",
    "extract",
    "extract_corpus",
    "read_metafeatures",
    "write_metafeatures",
]
