"""
pipemeta

Benchmark of preprocessing pipelines over tabular classification datasets,
with metafeature extraction, metamodels and an agent simulation on top.
"""

__version__ = "1.0.0"
__description__ = "Preprocessing pipeline benchmark and metalearning workbench"

__all__ = []
