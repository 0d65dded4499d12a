#!/usr/bin/env python3
"""
Text and CSV renderings of the analytics.

Each ``*_frame`` function returns the machine-readable table written as CSV;
each ``render_*`` function returns the aligned text printed on stdout.
"""

from pathlib import Path

import numpy as np
import pandas as pd

from ..core.logging_utils import get_component_logger
from ..core.validation import ValidationError
from ..runner.analytics import ImprovementCounts, RuntimeHistogram, RuntimeSummary

logger = get_component_logger("reports")

SIMULATION_COLUMNS = ["agent", "mean_pct_worse", "std_pct_worse", "n_tasks"]


def _pct(value: float, digits: int = 1) -> str:
    return "n/a" if value is None or np.isnan(value) else f"{value:.{digits}f}%"


def table1_frame(counts: ImprovementCounts) -> pd.DataFrame:
    """Long format: one row per (preproc, clf) cell plus Mean rows and columns."""
    rows = []
    for preproc in counts.time.index:
        for clf in counts.time.columns:
            rows.append({"preproc": preproc, "clf": clf, "time": float(counts.time.loc[preproc, clf]),
                         "accuracy": float(counts.accuracy.loc[preproc, clf]),
                         "both": float(counts.both.loc[preproc, clf])})
    for preproc, means in counts.row_means().iterrows():
        rows.append({"preproc": preproc, "clf": "Mean", **means.to_dict()})
    for clf, means in counts.column_means().iterrows():
        rows.append({"preproc": "Mean", "clf": clf, **means.to_dict()})
    grand = counts.grand_mean()
    rows.append({"preproc": "Mean", "clf": "Mean", "time": grand[0], "accuracy": grand[1], "both": grand[2]})
    return pd.DataFrame(rows, columns=["preproc", "clf", "time", "accuracy", "both"])


def render_table1(counts: ImprovementCounts) -> str:
    """Cells read time/accuracy/both."""
    def triple(t, a, b, fmt):
        return f"{t:{fmt}}/{a:{fmt}}/{b:{fmt}}"

    grid = pd.DataFrame(index=list(counts.time.index) + ["Mean"], columns=list(counts.time.columns) + ["Mean"],
                        dtype=object)
    for preproc in counts.time.index:
        for clf in counts.time.columns:
            grid.loc[preproc, clf] = triple(*(int(v) for v in (counts.time.loc[preproc, clf],
                                                               counts.accuracy.loc[preproc, clf],
                                                               counts.both.loc[preproc, clf])), "d")
    for preproc, means in counts.row_means().iterrows():
        grid.loc[preproc, "Mean"] = triple(means["time"], means["accuracy"], means["both"], ".1f")
    for clf, means in counts.column_means().iterrows():
        grid.loc["Mean", clf] = triple(means["time"], means["accuracy"], means["both"], ".1f")
    grid.loc["Mean", "Mean"] = triple(*counts.grand_mean(), ".1f")

    header = (f"Datasets where the pipeline improved on its baseline "
              f"(train time / test accuracy {counts.comparator} baseline / both)")
    return header + "\n" + grid.to_string()


def render_table2(deltas: pd.DataFrame) -> str:
    text = pd.DataFrame({
        "train mean": deltas["train_mean"].map(_pct),
        "train std": deltas["train_std"].map(_pct),
        "test mean": deltas["test_mean"].map(_pct),
        "test std": deltas["test_std"].map(_pct),
        "pairs": deltas["n_pairs"],
    })
    return "Accuracy above baseline (percentage points)\n" + text.to_string()


def fig1_frame(histogram: RuntimeHistogram) -> pd.DataFrame:
    """Histogram rows per phase, then one tail row per phase (bin_right holds the tail maximum)."""
    rows = []
    for phase, data in (("train", histogram.train), ("test", histogram.test)):
        for low, high, count in zip(histogram.edges[:-1], histogram.edges[1:], data.counts):
            rows.append({"phase": phase, "bin_left": float(low), "bin_right": float(high), "count": int(count)})
    for phase, data in (("train", histogram.train), ("test", histogram.test)):
        rows.append({"phase": f"{phase}_tail", "bin_left": histogram.truncate_at,
                     "bin_right": data.tail_max, "count": data.tail_count})
    return pd.DataFrame(rows, columns=["phase", "bin_left", "bin_right", "count"])


def render_fig1(histogram: RuntimeHistogram) -> str:
    frame = histogram.to_frame()
    frame.insert(0, "bin", [f"[{low:+.2f}, {high:+.2f}]" for low, high in zip(frame["bin_low"], frame["bin_high"])])
    lines = ["Relative runtime versus baseline", frame[["bin", "train_count", "test_count"]].to_string(index=False)]
    for phase, data in (("train", histogram.train), ("test", histogram.test)):
        tail = f"max {data.tail_max:.2f}" if data.tail_count else "none"
        lines.append(f"{phase}: {data.tail_count} above {histogram.truncate_at:g} ({tail}); "
                     f"{data.skipped} skipped for a zero baseline time")
    return "\n".join(lines)


def read_simulation(path: Path) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"simulation report not found: {path} (run `pipemeta simulate` first)")
    frame = pd.read_csv(path, float_precision="round_trip")
    if list(frame.columns) != SIMULATION_COLUMNS:
        raise ValidationError(f"{path}: expected columns {', '.join(SIMULATION_COLUMNS)}")
    return frame.set_index("agent")


def render_table3(simulation: pd.DataFrame) -> str:
    text = pd.DataFrame({
        "mean": simulation["mean_pct_worse"].map(lambda v: _pct(v, 2)),
        "std": simulation["std_pct_worse"].map(lambda v: _pct(v, 2)),
        "tasks": simulation["n_tasks"],
    }).T
    return "Percent worse than the Optimal agent\n" + text.to_string()


def render_summary(summary: RuntimeSummary, usage: pd.DataFrame, tradeoffs: pd.DataFrame) -> str:
    lines = [
        f"Pipelines compared with their baseline: {summary.n_pairs}",
        f"  faster to train:         {_pct(100 * summary.share_faster_train)}",
        f"  faster to test:          {_pct(100 * summary.share_faster_test)}",
        f"  lower test accuracy:     {_pct(100 * summary.share_lower_test_accuracy)}",
        f"  25th pct relative train: {summary.train_runtime_q25:.3f}",
        "",
        "Near-best pipelines using a preprocessor",
    ]
    for row in usage.itertuples(index=False):
        lines.append(f"  within {100 * row.tolerance:.0f}% of best: {row.n_with_preproc}/{row.n_pipelines} "
                     f"({_pct(100 * row.share_with_preproc)})")
    lines += ["", "Quarter-wise trade-offs", tradeoffs.to_string(float_format=lambda v: f"{v:.2f}")]
    return "\n".join(lines)


def summary_frame(summary: RuntimeSummary, usage: pd.DataFrame, tradeoffs: pd.DataFrame) -> pd.DataFrame:
    """Flat (section, metric, value) rows."""
    rows = [("runtime", name, float(getattr(summary, name))) for name in
            ("n_pairs", "share_faster_train", "share_faster_test", "share_lower_test_accuracy", "train_runtime_q25")]
    for row in usage.itertuples(index=False):
        rows.append(("top_pipelines", f"share_with_preproc@{row.tolerance:g}", float(row.share_with_preproc)))
    for group, row in tradeoffs.iterrows():
        for column in ("mean_test_delta_pp", "mean_rel_train_pct", "mean_rel_test_pct"):
            rows.append(("tradeoff", f"{group}.{column}", float(row[column])))
    return pd.DataFrame(rows, columns=["section", "metric", "value"])


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info(f"Wrote {path}")
    return path
