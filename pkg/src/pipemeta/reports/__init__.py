"""
Report Module

Aligned text tables for stdout and CSV tables written next to the results.
"""

from .tables import (
    fig1_frame,
    read_simulation,
    render_fig1,
    render_summary,
    render_table1,
    render_table2,
    render_table3,
    summary_frame,
    table1_frame,
    write_csv,
)

__all__ = [
    "table1_frame",
    "render_table1",
    "render_table2",
    "fig1_frame",
    "render_fig1",
    "read_simulation",
    "render_table3",
    "render_summary",
    "summary_frame",
    "write_csv",
]
