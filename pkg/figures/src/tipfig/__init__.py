"""Figure renderer for sliding-window eigenvalue analysis CSV outputs."""

from .figure import (
    FigureSpec,
    bifurcation_time_from_trajectory,
    build_analysis_figure,
    render_analysis_figure,
    render_phase_portrait,
)
from .schema import (
    PORTRAIT_COLUMNS,
    RECORDS_COLUMNS,
    TRAJECTORY_COLUMNS,
    SchemaError,
    read_portrait,
    read_records,
    read_trajectory,
)

__all__ = [
    "FigureSpec",
    "bifurcation_time_from_trajectory",
    "build_analysis_figure",
    "render_analysis_figure",
    "render_phase_portrait",
    "SchemaError",
    "read_records",
    "read_trajectory",
    "read_portrait",
    "RECORDS_COLUMNS",
    "TRAJECTORY_COLUMNS",
    "PORTRAIT_COLUMNS",
]
