"""Figure rendering for simulation result files."""

from .render import (
    KINDS,
    PlotJob,
    plot_heatmap,
    plot_trajectory,
    plot_utility,
    render_job,
)
from .schema import SchemaError, load_result, validate_result

__all__ = [
    "KINDS",
    "PlotJob",
    "SchemaError",
    "load_result",
    "plot_heatmap",
    "plot_trajectory",
    "plot_utility",
    "render_job",
    "validate_result",
]
